//! JSON output with floats at 17 significant digits, so reports are
//! byte-stable and every printed float reads back to the same `f64`.

use serde_json::Value;

/// `%.17g`-style formatting that keeps trailing zeros.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        // JSON has no NaN or infinity
        return format!("\"{x}\"");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0000000000000000".into() } else { "0.0000000000000000".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        format!("{mant}e{exp}")
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push_str(&serde_json::to_string(s).expect("string serializes"));
}

fn write_number(n: &serde_json::Number, out: &mut String) {
    if n.is_f64() {
        out.push_str(&format_float(n.as_f64().expect("f64")));
    } else {
        out.push_str(&n.to_string());
    }
}

/// Pretty JSON with two-space indent, or one line when `indent` is `None`.
pub fn write_value(v: &Value, out: &mut String, indent: Option<usize>) {
    let (nl, pad, inner_pad, sep) = match indent {
        Some(d) => ("\n", "  ".repeat(d), "  ".repeat(d + 1), ": "),
        None => ("", String::new(), String::new(), ":"),
    };
    let next = indent.map(|d| d + 1);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(n, out),
        Value::String(s) => write_string(s, out),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            // short arrays of scalars stay on one line
            let flat = items.len() <= 4 && items.iter().all(|x| !x.is_array() && !x.is_object());
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                    if flat && indent.is_some() {
                        out.push(' ');
                    }
                }
                if !flat {
                    out.push_str(nl);
                    out.push_str(&inner_pad);
                }
                write_value(item, out, if flat { None } else { next });
            }
            if !flat {
                out.push_str(nl);
                out.push_str(&pad);
            }
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(nl);
                out.push_str(&inner_pad);
                write_string(k, out);
                out.push_str(sep);
                write_value(item, out, next);
            }
            out.push_str(nl);
            out.push_str(&pad);
            out.push('}');
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, &mut s, Some(0));
    s
}

pub fn compact(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, &mut s, None);
    s
}
