use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A named check with data fields and sub-checks. A node passes when its
/// own flag is set and every child passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    pub fields: BTreeMap<String, Value>,
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            pass: true,
            fields: BTreeMap::new(),
            children: vec![],
        }
    }

    pub fn field(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.fields.insert(key.to_string(), v);
        self
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.field(key, value);
        self
    }

    /// Records a condition; the node fails if any condition fails.
    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.field(key, ok);
        self.pass &= ok;
        self
    }

    pub fn child(&mut self, r: Report) -> &mut Self {
        self.children.push(r);
        self
    }

    pub fn passed(&self) -> bool {
        self.pass && self.children.iter().all(|c| c.passed())
    }

    pub fn find(&self, name: &str) -> Option<&Report> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(name))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let mark = if self.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{pad}[{mark}] {}", self.name);
        for (k, v) in &self.fields {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{pad}    {k}: {shown}");
        }
        for c in &self.children {
            c.write_text(out, depth + 1);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_propagates_up() {
        let mut top = Report::new("top");
        let mut c = Report::new("child");
        c.check("holds", false);
        top.child(c);
        assert!(top.pass);
        assert!(!top.passed());
        assert!(top.to_text().contains("[FAIL] child"));
        let v: Value = serde_json::from_str(&top.to_json()).unwrap();
        assert_eq!(v["children"][0]["fields"]["holds"], Value::Bool(false));
        assert_eq!(Report::from_json(&top.to_json()).unwrap(), top);
    }
}
