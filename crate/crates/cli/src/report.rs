//! Reports and their two renderings.
//!
//! The structured form is one JSON object per job with these fields:
//!
//! | field | meaning |
//! |---|---|
//! | `schema_version` | integer, currently 1 |
//! | `command` | the job's command |
//! | `input` | the job in canonical input syntax |
//! | `theorem` | the structural statement applied, or `null` |
//! | `group_order` | order of the result group, or `null` |
//! | `invariant_factors` | for abelian results, else `null` |
//! | `identification` | isomorphism type name, or `null` |
//! | `certificate` | `{catalog, generator_images, verified}` or `null` |
//! | `assumptions` | hypotheses used without being checked |
//! | `details` | ordered `{key, value}` list |
//! | `checks` | ordered `{name, passed}` list |

use std::fmt::Write as _;

use blockpic_core::identify::{AbstractGroupId, Descriptor};
use blockpic_core::FiniteGroup;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub catalog: String,
    pub generator_images: Vec<String>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detail {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: String,
    pub theorem: Option<String>,
    pub group_order: Option<u64>,
    pub invariant_factors: Option<Vec<u64>>,
    pub identification: Option<String>,
    pub certificate: Option<Certificate>,
    pub assumptions: Vec<String>,
    pub details: Vec<Detail>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, input: String) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input,
            theorem: None,
            group_order: None,
            invariant_factors: None,
            identification: None,
            certificate: None,
            assumptions: vec![],
            details: vec![],
            checks: vec![],
        }
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.push(Detail {
            key: key.to_string(),
            value: value.to_string(),
        });
    }

    pub fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
        });
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Fill the group fields from an identification of `g`.
    pub fn set_group(&mut self, g: &FiniteGroup, id: &AbstractGroupId, verified: bool) {
        self.group_order = Some(g.order() as u64);
        self.invariant_factors = id.invariant_factors();
        self.identification = Some(id.type_name());
        if let Descriptor::Named { name, certificate } = &id.descriptor {
            self.certificate = Some(Certificate {
                catalog: name.clone(),
                generator_images: certificate.generator_images.iter().map(|&x| g.label(x)).collect(),
                verified,
            });
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "schema_version: {}", self.schema_version);
        let _ = writeln!(out, "command: {}", self.command);
        for line in self.input.lines() {
            let _ = writeln!(out, "input: {line}");
        }
        if let Some(t) = &self.theorem {
            let _ = writeln!(out, "theorem: {t}");
        }
        if let Some(n) = self.group_order {
            let _ = writeln!(out, "group_order: {n}");
        }
        if let Some(inv) = &self.invariant_factors {
            let cells: Vec<String> = inv.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "invariant_factors: [{}]", cells.join(","));
        }
        if let Some(id) = &self.identification {
            let _ = writeln!(out, "identification: {id}");
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(
                out,
                "certificate: {} generators -> {} ({})",
                c.catalog,
                c.generator_images.join(", "),
                if c.verified { "verified" } else { "NOT verified" }
            );
        }
        for a in &self.assumptions {
            let _ = writeln!(out, "assumption: {a}");
        }
        for d in &self.details {
            let _ = writeln!(out, "{}: {}", d.key, d.value);
        }
        for c in &self.checks {
            let _ = writeln!(out, "check {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// SHA-256 of the text rendering, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// `order 6, cyclic(6)` or `order 6, identified S3`.
pub fn summary(id: &AbstractGroupId) -> String {
    match &id.descriptor {
        Descriptor::Cyclic(n) => format!("order {}, cyclic({n})", id.order),
        _ => format!("order {}, identified {}", id.order, id.type_name()),
    }
}
