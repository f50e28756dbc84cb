//! Suite reports and their serialized forms.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "freefield-report/1";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub parameters: BTreeMap<String, String>,
}

impl Case {
    pub fn new(name: impl Into<String>, pass: bool, expected: impl Display, computed: impl Display) -> Case {
        Case {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            computed: computed.to_string(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn error(name: impl Into<String>, expected: impl Display, err: impl Display) -> Case {
        Case::new(name, false, expected, format!("error: {err}"))
    }

    pub fn skipped(name: impl Into<String>, expected: impl Display, why: impl Display) -> Case {
        Case { status: Status::Skipped, ..Case::new(name, true, expected, why) }
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Case {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of<'a>(cases: impl IntoIterator<Item = &'a Case>) -> Summary {
        let mut s = Summary::default();
        for c in cases {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
    /// Sum of the case running times, in milliseconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub mode_convention: String,
    pub charge_sign: i64,
    pub cocycle: String,
    pub scalars: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            mode_convention: "formal u_(n) is the coefficient of z^(-n-1); weighted u_n = u_(n + wt u - 1)".into(),
            charge_sign: freefield::weyl::CHARGE_SIGN,
            cocycle: "trivial".into(),
            scalars: "exact over Q(s2)(x), s2 = sqrt 2, x = generic momentum".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub engine_version: String,
    pub conventions: Conventions,
    pub budgets: BTreeMap<String, i64>,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
    pub status: Status,
    /// Wall-clock time of the whole run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(budgets: BTreeMap<String, i64>, suites: Vec<SuiteReport>, timing_ms: Option<u64>) -> Report {
        let summary = Summary::of(suites.iter().flat_map(|s| &s.cases));
        Report {
            schema: SCHEMA.into(),
            engine_version: ENGINE_VERSION.into(),
            conventions: Conventions::default(),
            budgets,
            suites,
            status: if summary.fail == 0 { Status::Pass } else { Status::Fail },
            summary,
            timing_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Pretty JSON with sorted keys, newline terminated.
    pub fn to_structured(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    /// One line per case: suite, case, status, expected, computed, parameters.
    pub fn to_tsv(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        let mut out = format!("# {SCHEMA}\nsuite\tcase\tstatus\texpected\tcomputed\tparameters\n");
        for s in &self.suites {
            for c in &s.cases {
                let params: Vec<String> = c.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let status = serde_json::to_value(c.status).expect("status serializes");
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    s.suite,
                    clean(&c.name),
                    status.as_str().unwrap_or_default(),
                    clean(&c.expected),
                    clean(&c.computed),
                    clean(&params.join(";"))
                ));
            }
        }
        out
    }
}

/// Remove every `timing_ms` field from a structured report, for comparing runs.
pub fn strip_timing(text: &str) -> Result<String, serde_json::Error> {
    fn walk(v: &mut Value) {
        match v {
            Value::Object(m) => {
                m.remove("timing_ms");
                m.values_mut().for_each(walk);
            }
            Value::Array(a) => a.iter_mut().for_each(walk),
            _ => {}
        }
    }
    let mut v: Value = serde_json::from_str(text)?;
    walk(&mut v);
    serde_json::to_string_pretty(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(timing: Option<u64>) -> Report {
        let cases = vec![Case::new("b", true, "1", "1").with("z", 1).with("a", 2), Case::new("a", false, "0", "1")];
        let suite = SuiteReport { suite: "demo".into(), summary: Summary::of(&cases), cases, timing_ms: timing };
        Report::new(BTreeMap::from([("demo.depth".into(), 3)]), vec![suite], timing)
    }

    #[test]
    fn keys_are_sorted() {
        let s = sample(None).to_structured();
        let a = s.find("\"budgets\"").unwrap();
        let b = s.find("\"conventions\"").unwrap();
        let c = s.find("\"suites\"").unwrap();
        assert!(a < b && b < c);
        assert!(s.find("\"a\": \"2\"").unwrap() < s.find("\"z\": \"1\"").unwrap());
    }

    #[test]
    fn timing_is_strippable() {
        let x = strip_timing(&sample(Some(5)).to_structured()).unwrap();
        let y = strip_timing(&sample(Some(99)).to_structured()).unwrap();
        assert_eq!(x, y);
        assert!(!x.contains("timing_ms"));
    }

    #[test]
    fn status_follows_failures() {
        let r = sample(None);
        assert!(!r.passed());
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skipped: 0 });
        assert_eq!(r.to_tsv().lines().count(), 4);
    }
}
