//! Key/value records printed as aligned text or as a one-row CSV.

use minkowski_lattice::table::format_sig17;
use minkowski_lattice::Vec2;

enum Value {
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(String),
    Point(Vec2),
}

#[derive(Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

/// Six significant digits, positional where that stays readable.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.push(key, Value::Num(x))
    }

    pub fn int(&mut self, key: &str, n: i64) -> &mut Self {
        self.push(key, Value::Int(n))
    }

    pub fn flag(&mut self, key: &str, b: bool) -> &mut Self {
        self.push(key, Value::Flag(b))
    }

    pub fn text(&mut self, key: &str, s: &str) -> &mut Self {
        self.push(key, Value::Text(s.to_string()))
    }

    pub fn point(&mut self, key: &str, v: Vec2) -> &mut Self {
        self.push(key, Value::Point(v))
    }

    pub fn to_text(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            let shown = match v {
                Value::Num(x) => fmt6(*x),
                Value::Int(n) => n.to_string(),
                Value::Flag(b) => b.to_string(),
                Value::Text(s) => s.clone(),
                Value::Point(p) => format!("({}, {})", fmt6(p.x), fmt6(p.y)),
            };
            out.push_str(&format!("{k:<width$}  {shown}\n"));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut keys = Vec::new();
        let mut values = Vec::new();
        for (k, v) in &self.fields {
            match v {
                Value::Point(p) => {
                    keys.push(format!("{k}_x"));
                    keys.push(format!("{k}_y"));
                    values.push(format_sig17(p.x));
                    values.push(format_sig17(p.y));
                }
                other => {
                    keys.push(k.clone());
                    values.push(match other {
                        Value::Num(x) => format_sig17(*x),
                        Value::Int(n) => n.to_string(),
                        Value::Flag(b) => b.to_string(),
                        Value::Text(s) => csv_escape(s),
                        Value::Point(_) => unreachable!(),
                    });
                }
            }
        }
        format!("{}\n{}\n", keys.join(","), values.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(fmt6(0.267_949_192_431_122_7), "0.267949");
        assert_eq!(fmt6(1.732_050_807_568_877), "1.73205");
        assert_eq!(fmt6(32.0 * 3f64.sqrt()), "55.4256");
        assert_eq!(fmt6(-1.5e-7), "-1.50000e-7");
    }

    #[test]
    fn csv_row() {
        let mut r = Record::new();
        r.num("p", 2.0).text("class", "Davis").point("v", Vec2::new(1.0, -0.5));
        assert_eq!(
            r.to_csv(),
            "p,class,v_x,v_y\n2.0000000000000000,Davis,1.0000000000000000,-0.50000000000000000\n"
        );
    }
}
