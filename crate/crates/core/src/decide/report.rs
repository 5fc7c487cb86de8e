use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::category::{FiniteCategory, PathEquation, PathWitness};
use crate::semigroup::{IdentitySet, IdentityWitness, SyntacticPresentation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Definable,
    NotDefinable,
    ReducedInstanceEmitted,
    /// Output of `analyze`, which decides nothing.
    Informational,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Definable => "definable",
            Verdict::NotDefinable => "not_definable",
            Verdict::ReducedInstanceEmitted => "reduced_instance_emitted",
            Verdict::Informational => "informational",
        }
    }
}

/// An element together with a word that maps to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRef {
    pub element: u32,
    pub label: String,
}

impl ElementRef {
    pub fn new(pres: &SyntacticPresentation, element: u32) -> ElementRef {
        ElementRef {
            element,
            label: pres.element_label(element),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableValue {
    pub variable: String,
    pub value: ElementRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectValue {
    pub vertex: String,
    pub object: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeValue {
    pub edge: String,
    pub src: usize,
    pub dst: usize,
    pub value: ElementRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A failing assignment of an identity.
    Identity {
        identities: String,
        equation: String,
        /// Set when the identity failed in the local monoid `eSe`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        local_idempotent: Option<ElementRef>,
        assignment: Vec<VariableValue>,
        lhs: ElementRef,
        rhs: ElementRef,
    },
    /// A graph morphism on which a path equation fails.
    Path {
        /// `C_d` or `S_E`.
        category: String,
        equation: String,
        objects: Vec<ObjectValue>,
        edges: Vec<EdgeValue>,
        lhs: ElementRef,
        rhs: ElementRef,
    },
}

impl Witness {
    pub fn identity(
        pres: &SyntacticPresentation,
        ids: &IdentitySet,
        w: &IdentityWitness,
        local_idempotent: Option<u32>,
    ) -> Witness {
        Witness::Identity {
            identities: ids.name.clone(),
            equation: ids.equations[w.equation].to_string(),
            local_idempotent: local_idempotent.map(|e| ElementRef::new(pres, e)),
            assignment: w
                .assignment
                .iter()
                .map(|&(v, x)| VariableValue {
                    variable: v.to_string(),
                    value: ElementRef::new(pres, x),
                })
                .collect(),
            lhs: ElementRef::new(pres, w.lhs),
            rhs: ElementRef::new(pres, w.rhs),
        }
    }

    pub fn path(
        category: &str,
        c: &FiniteCategory,
        eqs: &[PathEquation],
        w: &PathWitness,
    ) -> Witness {
        let eq = &eqs[w.equation];
        let label = |v: u32| ElementRef {
            element: v,
            label: c.value_label(v),
        };
        let object_of = |vertex: usize| w.objects[vertex].1;
        Witness::Path {
            category: category.to_string(),
            equation: eq.to_string(),
            objects: w
                .objects
                .iter()
                .map(|(v, o)| ObjectValue {
                    vertex: v.clone(),
                    object: *o,
                })
                .collect(),
            edges: eq
                .graph()
                .edges()
                .iter()
                .zip(&w.edges)
                .map(|(e, (name, v))| EdgeValue {
                    edge: name.clone(),
                    src: object_of(e.src),
                    dst: object_of(e.dst),
                    value: label(*v),
                })
                .collect(),
            lhs: label(w.lhs),
            rhs: label(w.rhs),
        }
    }

    pub fn sides(&self) -> (&ElementRef, &ElementRef) {
        match self {
            Witness::Identity { lhs, rhs, .. } | Witness::Path { lhs, rhs, .. } => (lhs, rhs),
        }
    }
}

/// Status of one built-in identity set in `analyze`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityStatus {
    Holds,
    Fails,
    /// The assignment space exceeded the configured cap.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub identities: String,
    pub syntactic_monoid: IdentityStatus,
    pub stable_monoid: IdentityStatus,
}

/// Result of a decision or of `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceReport {
    pub schema_version: u32,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fragment: Option<String>,
    pub stability_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
    pub sizes: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub epsilon_in_language: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_instance: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityRow>,
}

impl EvidenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<EvidenceReport> {
        serde_json::from_str(text)
    }

    /// Plain-text rendering, one fact per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if let Some(f) = &self.fragment {
            let _ = writeln!(out, "fragment: {f}");
        }
        let _ = writeln!(out, "stability index: {}", self.stability_index);
        if let Some(d) = self.modulus {
            let _ = writeln!(out, "modulus: {d}");
        }
        for (name, size) in &self.sizes {
            let _ = writeln!(out, "size {}: {size}", name.replace('_', " "));
        }
        let _ = writeln!(out, "empty word in language: {}", self.epsilon_in_language);
        for row in &self.identities {
            let status = |s: IdentityStatus| match s {
                IdentityStatus::Holds => "holds",
                IdentityStatus::Fails => "fails",
                IdentityStatus::Skipped => "skipped",
            };
            let _ = writeln!(
                out,
                "identities {}: syntactic monoid {}, stable monoid {}",
                row.identities,
                status(row.syntactic_monoid),
                status(row.stable_monoid)
            );
        }
        match &self.witness {
            Some(Witness::Identity {
                identities,
                equation,
                local_idempotent,
                assignment,
                lhs,
                rhs,
            }) => {
                let _ = writeln!(out, "witness: {identities} fails on {equation}");
                if let Some(e) = local_idempotent {
                    let _ = writeln!(out, "  in the local monoid at idempotent {}", e.label);
                }
                for v in assignment {
                    let _ = writeln!(out, "  {} = {}", v.variable, v.value.label);
                }
                let _ = writeln!(out, "  lhs = {}, rhs = {}", lhs.label, rhs.label);
            }
            Some(Witness::Path {
                category,
                equation,
                objects,
                edges,
                lhs,
                rhs,
            }) => {
                let _ = writeln!(out, "witness: {category} fails {equation}");
                for o in objects {
                    let _ = writeln!(out, "  {} -> object {}", o.vertex, o.object);
                }
                for e in edges {
                    let _ = writeln!(
                        out,
                        "  {} = {} : {} -> {}",
                        e.edge, e.value.label, e.src, e.dst
                    );
                }
                let _ = writeln!(out, "  lhs = {}, rhs = {}", lhs.label, rhs.label);
            }
            None => {}
        }
        if let Some(dfa) = &self.reduced_instance {
            let _ = writeln!(out, "reduced instance:");
            out.push_str(dfa);
            if !dfa.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}
