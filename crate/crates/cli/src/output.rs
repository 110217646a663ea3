use quadvol_core::{DecimalValue, PiMonomial, Rational, ZetaQuotient};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One computed quantity. `decimal` is always rendered from `exact`.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub quantity: String,
    pub exact: Value,
    pub display: String,
    pub decimal: String,
    pub source: &'static str,
}

impl Record {
    pub fn pi(quantity: impl Into<String>, v: &PiMonomial, digits: u32, source: &'static str) -> Self {
        Record {
            quantity: quantity.into(),
            exact: serde_json::to_value(v).expect("serializable"),
            display: v.to_string(),
            decimal: v.decimal(digits),
            source,
        }
    }

    pub fn rational(quantity: impl Into<String>, q: &Rational, digits: u32, source: &'static str) -> Self {
        Record::pi(quantity, &PiMonomial::rational(q.clone()), digits, source)
    }

    pub fn zeta(quantity: impl Into<String>, z: &ZetaQuotient, digits: u32, source: &'static str) -> Self {
        let decimal = match z.decimal(digits) {
            DecimalValue::Finite(s) => s,
            DecimalValue::Divergent => "divergent".into(),
        };
        Record {
            quantity: quantity.into(),
            exact: serde_json::to_value(z).expect("serializable"),
            display: z.to_string(),
            decimal,
            source,
        }
    }

    pub fn divergent(quantity: impl Into<String>, source: &'static str) -> Self {
        Record {
            quantity: quantity.into(),
            exact: json!("divergent"),
            display: "divergent".into(),
            decimal: "divergent".into(),
            source,
        }
    }
}

/// Records plus free-form notes and extra JSON fields.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("quantity,exact,decimal\n");
                for r in &self.records {
                    s.push_str(&format!("{},{},{}\n", csv_field(&r.quantity), csv_field(&r.display), r.decimal));
                }
                s
            }
            Format::Text => {
                let width = self.records.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
                let mut s = String::new();
                for r in &self.records {
                    if r.display == r.decimal {
                        s.push_str(&format!("{:width$}  {}\n", r.quantity, r.display));
                    } else {
                        s.push_str(&format!("{:width$}  {}  ~ {}\n", r.quantity, r.display, r.decimal));
                    }
                }
                for (k, v) in self.extra.iter().filter(|(_, v)| !v.is_array() && !v.is_object()) {
                    s.push_str(&format!("{k}: {v}\n"));
                }
                for n in &self.notes {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
