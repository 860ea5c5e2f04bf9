use std::fmt::Write as _;

use serde_json::Value;

/// One row of a curve table.
pub struct Point {
    pub u: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// `x` rounded to 6 significant digits, printed without exponent noise.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn curve_csv(points: &[Point]) -> String {
    let with_se = points.iter().any(|p| p.stderr.is_some());
    let mut out = String::from(if with_se {
        "u,value,stderr\n"
    } else {
        "u,value\n"
    });
    for p in points {
        let _ = write!(out, "{},{}", sig6(p.u), sig6(p.value));
        if with_se {
            let _ = write!(out, ",{}", p.stderr.map_or(String::new(), sig6));
        }
        out.push('\n');
    }
    out
}

pub fn curve_json(points: &[Point]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                let mut m = serde_json::Map::new();
                m.insert("u".into(), p.u.into());
                m.insert("value".into(), p.value.into());
                if let Some(se) = p.stderr {
                    m.insert("stderr".into(), se.into());
                }
                Value::Object(m)
            })
            .collect(),
    )
}

/// Pretty JSON with sorted keys. Parsing the result and printing it again
/// gives the same bytes.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
