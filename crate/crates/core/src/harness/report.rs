use crate::exponents::ScaleSummary;

/// Formats like C's `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    fmt_g(x, 12)
}

/// Header of a per-scale sweep table.
pub fn scale_csv_header(p_list: &[u32]) -> String {
    let mut cols = vec![
        "n",
        "replicas",
        "excluded",
        "mean",
        "stderr_mean",
        "var",
        "stderr_var",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>();
    for p in p_list {
        cols.push(format!("norm_{p}"));
        cols.push(format!("stderr_norm_{p}"));
    }
    cols.push("status".into());
    cols.join(",")
}

/// One-row CSV table for a scale.
pub fn scale_csv(s: &ScaleSummary, p_list: &[u32]) -> String {
    let mut cells = vec![
        s.n.to_string(),
        s.replicas.to_string(),
        s.excluded.to_string(),
        fmt_g12(s.mean),
        fmt_g12(s.stderr_mean),
        fmt_g12(s.var),
        fmt_g12(s.stderr_var),
    ];
    for &p in p_list {
        match s.norm(p) {
            Some(e) => {
                cells.push(fmt_g12(e.value));
                cells.push(fmt_g12(e.stderr));
            }
            None => cells.extend(["nan".to_string(), "nan".to_string()]),
        }
    }
    cells.push(s.status.clone());
    format!("{}\n{}\n", scale_csv_header(p_list), cells.join(","))
}

/// Rounds every float in `v` to 12 significant digits; non-finite values
/// become `null`.
pub fn rounded_json(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            fmt_g12(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded_json).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, rounded_json(v))).collect())
        }
        other => other,
    }
}

fn fmt_g(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", prec - 1, x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= prec as i32 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (prec as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
