use serde::Serialize;
use serde_json::{json, Value};

use crate::{Outcome, Pipeline};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineError {
    pub pipeline: Pipeline,
    pub error: String,
}

/// The JSON report. Object keys come out sorted because `serde_json::Map`
/// is ordered.
#[derive(Debug, Clone)]
pub struct Report(pub Value);

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.0).expect("report values are serializable");
        s.push('\n');
        s
    }

    pub fn get(&self, pointer: &str) -> Option<&Value> {
        self.0.pointer(pointer)
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values are serializable")
}

pub(crate) fn build(out: &Outcome) -> Report {
    let mut root = json!({
        "schema": SCHEMA,
        "rates": out.rates,
        "consistency": value(&out.checks),
        "errors": value(&out.errors),
        "pass": out.pass(),
    });
    let obj = root.as_object_mut().expect("object literal");

    if let Some(l) = &out.law {
        obj.insert(
            "law".into(),
            json!({
                "b": l.b,
                "j_max": l.j_max(),
                "m_d": l.m_d,
                "m_b": l.m_b,
                "bprime1": l.bprime1,
                "bpp1": l.bpp1,
                "birth_mass": l.birth_mass,
                "criticality": value(&l.criticality),
                "a": l.series.a,
            }),
        );
    }
    if let Some(h) = &out.hardy {
        let mut v = value(h);
        let m = v.as_object_mut().expect("struct");
        m.remove("curve");
        m.insert("curve_points".into(), json!(h.curve.len()));
        obj.insert("hardy".into(), v);
    }
    if let Some((rep, cmp)) = &out.bounds {
        obj.insert(
            "bounds".into(),
            json!({ "report": value(rep), "comparison": value(cmp) }),
        );
    }
    if let Some(e) = &out.eigen {
        let mut v = value(e);
        let m = v.as_object_mut().expect("struct");
        m.remove("eigfun");
        m.insert("eigfun_points".into(), json!(e.eigfun.len()));
        obj.insert("eigen".into(), v);
    }
    if let Some(d) = &out.decay {
        let mut c = json!({ "uniformization": value(d) });
        if let Some((s, fit)) = &out.mc {
            let cm = c.as_object_mut().expect("object literal");
            cm.insert(
                "monte_carlo".into(),
                json!({
                    "n_paths": s.n_paths,
                    "censored": s.censored,
                    "points": s.times.len(),
                    "estimate": fit.as_ref().map(value),
                }),
            );
        }
        obj.insert("ctmc".into(), c);
    }
    Report(root)
}
