//! Structural validator for JSON reports.
//!
//! A report is an object with exactly three members:
//!
//! | member    | type                                                              |
//! |-----------|-------------------------------------------------------------------|
//! | `config`  | `{hbar: number > 0, cutoff: integer >= 1, support_pad: integer >= 0, seed: u64, output_format: "json" \| "csv" \| "text"}` |
//! | `results` | array of `{k, l, m, n: integer >= 0, branch, value: number >= 0, method, coefficients: null \| [number, number], saturated: bool, truncation_safe: bool}` |
//! | `checks`  | array of `{name: string, pass: bool, detail: string}`             |
//!
//! `branch` is one of `zero`, `adjacent_1`, `adjacent_2`, `far`; `method` is one
//! of `closed_form`, `ansatz`, `numeric`. No other members are allowed anywhere.

use serde_json::{Map, Value};

const BRANCHES: [&str; 4] = ["zero", "adjacent_1", "adjacent_2", "far"];
const METHODS: [&str; 3] = ["closed_form", "ansatz", "numeric"];
const FORMATS: [&str; 3] = ["json", "csv", "text"];

/// Returns every violation found, each prefixed by a JSON-pointer-like path.
pub fn validate_report(report: &Value) -> Result<(), Vec<String>> {
    let mut v = Validator::default();
    if let Some(top) = v.object(report, "", &["config", "results", "checks"]) {
        v.config(&top["config"]);
        v.array(&top["results"], "/results", |v, item, path| v.record(item, path));
        v.array(&top["checks"], "/checks", |v, item, path| v.check(item, path));
    }
    if v.errors.is_empty() {
        Ok(())
    } else {
        Err(v.errors)
    }
}

#[derive(Default)]
struct Validator {
    errors: Vec<String>,
}

impl Validator {
    fn fail(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{}: {msg}", if path.is_empty() { "/" } else { path }));
    }

    /// Checks that `value` is an object with exactly `keys`.
    fn object<'a>(&mut self, value: &'a Value, path: &str, keys: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(map) = value.as_object() else {
            self.fail(path, "expected an object");
            return None;
        };
        let mut complete = true;
        for key in keys {
            if !map.contains_key(*key) {
                self.fail(path, format_args!("missing member `{key}`"));
                complete = false;
            }
        }
        for key in map.keys() {
            if !keys.contains(&key.as_str()) {
                self.fail(path, format_args!("unexpected member `{key}`"));
            }
        }
        complete.then_some(map)
    }

    fn array(&mut self, value: &Value, path: &str, mut each: impl FnMut(&mut Self, &Value, &str)) {
        match value.as_array() {
            Some(items) => {
                for (i, item) in items.iter().enumerate() {
                    each(self, item, &format!("{path}/{i}"));
                }
            }
            None => self.fail(path, "expected an array"),
        }
    }

    fn integer(&mut self, value: &Value, path: &str, min: u64) {
        match value.as_u64() {
            Some(x) if x >= min => {}
            _ => self.fail(path, format_args!("expected an integer >= {min}")),
        }
    }

    fn number(&mut self, value: &Value, path: &str, positive: bool) {
        match value.as_f64() {
            Some(x) if x > 0.0 || (!positive && x >= 0.0) => {}
            _ => self.fail(path, if positive { "expected a number > 0" } else { "expected a number >= 0" }),
        }
    }

    fn boolean(&mut self, value: &Value, path: &str) {
        if !value.is_boolean() {
            self.fail(path, "expected a boolean");
        }
    }

    fn string(&mut self, value: &Value, path: &str, allowed: Option<&[&str]>) {
        match (value.as_str(), allowed) {
            (Some(s), Some(allowed)) if !allowed.contains(&s) => {
                self.fail(path, format_args!("`{s}` is not one of {allowed:?}"))
            }
            (Some(_), _) => {}
            (None, _) => self.fail(path, "expected a string"),
        }
    }

    fn config(&mut self, value: &Value) {
        let keys = ["hbar", "cutoff", "support_pad", "seed", "output_format"];
        if let Some(c) = self.object(value, "/config", &keys) {
            self.number(&c["hbar"], "/config/hbar", true);
            self.integer(&c["cutoff"], "/config/cutoff", 1);
            self.integer(&c["support_pad"], "/config/support_pad", 0);
            self.integer(&c["seed"], "/config/seed", 0);
            self.string(&c["output_format"], "/config/output_format", Some(&FORMATS));
        }
    }

    fn record(&mut self, value: &Value, path: &str) {
        let keys = ["k", "l", "m", "n", "branch", "value", "method", "coefficients", "saturated", "truncation_safe"];
        let Some(r) = self.object(value, path, &keys) else { return };
        for key in ["k", "l", "m", "n"] {
            self.integer(&r[key], &format!("{path}/{key}"), 0);
        }
        self.string(&r["branch"], &format!("{path}/branch"), Some(&BRANCHES));
        self.number(&r["value"], &format!("{path}/value"), false);
        self.string(&r["method"], &format!("{path}/method"), Some(&METHODS));
        let coefficients = &r["coefficients"];
        let pair_ok = coefficients.as_array().is_some_and(|a| a.len() == 2 && a.iter().all(Value::is_number));
        if !(coefficients.is_null() || pair_ok) {
            self.fail(&format!("{path}/coefficients"), "expected null or a pair of numbers");
        }
        self.boolean(&r["saturated"], &format!("{path}/saturated"));
        self.boolean(&r["truncation_safe"], &format!("{path}/truncation_safe"));
    }

    fn check(&mut self, value: &Value, path: &str) {
        let Some(c) = self.object(value, path, &["name", "pass", "detail"]) else { return };
        self.string(&c["name"], &format!("{path}/name"), None);
        self.boolean(&c["pass"], &format!("{path}/pass"));
        self.string(&c["detail"], &format!("{path}/detail"), None);
    }
}
