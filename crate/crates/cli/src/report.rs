//! Reports in plain text and JSON, and truncated pro-objects.

use crate::base::Base;
use procat::pro::{ProObject, ProWindow};
use procat::{Check, Verdict};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;

pub const REPORT_FORMAT: &str = "procat-report/1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub command: String,
    pub input_digest: Option<String>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    pub fn new(
        command: &str,
        input_digest: Option<String>,
        depth: usize,
        checks: Vec<Check>,
        output: Option<Value>,
    ) -> Self {
        let verdict = match checks.is_empty() {
            true => Verdict::Undetermined,
            false => checks
                .iter()
                .fold(Verdict::Certified, |v, c| v.and(c.verdict)),
        };
        Report {
            format: REPORT_FORMAT,
            command: command.into(),
            input_digest,
            depth,
            seed: None,
            verdict,
            checks,
            output,
            wall_time_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Certified => 0,
            Verdict::Refuted => 2,
            Verdict::Undetermined | Verdict::Exhausted => 3,
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{REPORT_FORMAT}");
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(s, "input: {d}");
        }
        let _ = writeln!(s, "depth: {}", self.depth);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed: {seed}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "checks:");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  {:<12} {} (depth {})",
                c.verdict.to_string(),
                c.name,
                c.depth
            );
            for w in &c.witnesses {
                let _ = writeln!(s, "      {w}");
            }
        }
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output:");
            for line in serde_json::to_string_pretty(o)
                .expect("output serializes")
                .lines()
            {
                let _ = writeln!(s, "  {line}");
            }
        }
        if let Some(t) = self.wall_time_ms {
            let _ = writeln!(s, "wall time: {t:.1} ms");
        }
        s
    }
}

/// Levels and covering structure maps of a window, plus the rule that
/// generates the object.
pub fn window_json<C: Base>(name: &str, rule: &str, w: &ProWindow<C>) -> Value {
    let n = w.len();
    let mut reach = vec![vec![false; n]; n];
    for a in &w.arrows {
        reach[a.source][a.target] = true;
    }
    let covers = |u: usize, t: usize| {
        u != t && !(0..n).any(|v| v != u && v != t && reach[u][v] && reach[v][t])
    };
    let levels: Vec<Value> = w
        .labels
        .iter()
        .zip(&w.objects)
        .map(|(l, o)| json!({ "label": l.to_string(), "object": C::obj_json(o) }))
        .collect();
    let maps: Vec<Value> = w
        .arrows
        .iter()
        .filter(|a| covers(a.source, a.target))
        .map(|a| json!({ "from": w.labels[a.source].to_string(), "to": w.labels[a.target].to_string(), "map": C::map_json(&a.map) }))
        .collect();
    json!({ "name": name, "category": C::NAME, "rule": rule, "levels": levels, "maps": maps })
}

pub fn object_json<C: Base>(x: &ProObject<C>, rule: &str, depth: usize) -> procat::Result<Value> {
    let mut v = window_json(x.name(), rule, &x.window(depth)?);
    v["index"] = json!(x.index().describe());
    Ok(v)
}
