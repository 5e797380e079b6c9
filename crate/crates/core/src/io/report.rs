//! Ordered reports rendered as aligned plain text or as `key = value`
//! documents.

use std::fmt::{self, Write as _};

use super::format_float;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Floats(Vec<f64>),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{x}"),
            Value::Float(x) => f.write_str(&format_float(*x)),
            Value::Floats(xs) => {
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        f.write_char(' ')?;
                    }
                    f.write_str(&format_float(*x))?;
                }
                Ok(())
            }
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<nalgebra::Vector3<f64>> for Value {
    fn from(v: nalgebra::Vector3<f64>) -> Self {
        Value::Floats(vec![v.x, v.y, v.z])
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    /// Appends an entry; line breaks in text are flattened to spaces.
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        let value = match value.into() {
            Value::Text(s) => Value::Text(s.replace(['\n', '\r'], " ")),
            v => v,
        };
        self.entries.push((key.into(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_key_value(&self) -> String {
        let mut out = format!("# {}\n", self.title);
        for (k, v) in &self.entries {
            writeln!(out, "{k} = {v}").expect("string write");
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.title);
        for (k, v) in &self.entries {
            writeln!(out, "  {k:<width$}  {v}").expect("string write");
        }
        out
    }

    /// Reads a `key = value` document back, with every value as text.
    pub fn parse_key_value(text: &str) -> Vec<(String, String)> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_shortest_round_trip_form() {
        let mut r = Report::new("t");
        let x = 0.1 + 0.2;
        r.push("x", x).push("n", 3usize).push("v", nalgebra::Vector3::new(1.0, -0.5, 1e-300));
        r.push("s", "a\nb");
        let kv = r.to_key_value();
        assert_eq!(kv, "# t\nx = 0.30000000000000004\nn = 3\nv = 1.0 -0.5 1e-300\ns = a b\n");
        let back = Report::parse_key_value(&kv);
        assert_eq!(back[0].1.parse::<f64>().unwrap().to_bits(), x.to_bits());
        assert!(r.to_text().contains("  x  0.30000000000000004\n"));
    }
}
