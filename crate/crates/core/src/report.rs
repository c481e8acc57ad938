//! The `analyze` report for a one-player mechanism.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::io::Json;
use crate::mechanism::{
    cardinality_sensitivity, hamming_sensitivity, indifference_complex, utility_polynomial,
    verify_complex_by_intersection, AllocationNetwork, Mechanism,
};
use crate::scalar::format_rational;
use crate::subdivision::is_regular;

pub const REPORT_SCHEMA: &str = "tropmech/analyze-report/v1";

/// Largest item count for which the intersection oracle and cycle audit run.
pub const AUDIT_MAX_ITEMS: usize = 4;
pub const AUDIT_MAX_ARCS: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionReport {
    pub cells: Vec<Vec<usize>>,
    pub regular: bool,
    pub witness_reproduces: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SensitivityReport {
    pub cardinality: u64,
    pub hamming: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TightSpanReport {
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    pub performed: bool,
    pub max_arcs: usize,
    pub cycles_checked: usize,
    pub nonzero_cycles: usize,
    pub closure_only_arcs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub items: usize,
    pub payments: BTreeMap<String, String>,
    pub subdivision: SubdivisionReport,
    pub facets: Vec<Vec<String>>,
    pub nondegenerate: bool,
    pub sensitivity: SensitivityReport,
    pub tight_span: TightSpanReport,
    /// `None` when the mechanism is too large for the intersection oracle.
    pub complex_verified: Option<bool>,
    pub zero_cycle_audit: CycleReport,
}

impl AnalyzeReport {
    /// Human-readable descriptions of failed checks; empty when everything holds.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.subdivision.regular || !self.subdivision.witness_reproduces {
            out.push("regularity witness does not reproduce the subdivision".to_string());
        }
        if self.complex_verified == Some(false) {
            out.push("difference-set intersections disagree with the subdivision".to_string());
        }
        if self.zero_cycle_audit.nonzero_cycles > 0 {
            out.push(format!("{} adjacent cycles have nonzero length", self.zero_cycle_audit.nonzero_cycles));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn analyze(mech: &Mechanism) -> Result<AnalyzeReport> {
    let sub = mech.subdivision()?;
    let regularity = is_regular(&sub)?;
    let complex = indifference_complex(mech)?;
    let ts = utility_polynomial(mech).tight_span()?;
    let small = mech.items() <= AUDIT_MAX_ITEMS;
    let complex_verified = if small { Some(verify_complex_by_intersection(mech)?) } else { None };
    let zero_cycle_audit = if small {
        let net = AllocationNetwork::new(mech)?;
        let (checked, bad) = net.audit_cycles(AUDIT_MAX_ARCS);
        let closure_only = net.arcs.iter().flatten().filter(|a| a.closure_only).count();
        CycleReport {
            performed: true,
            max_arcs: AUDIT_MAX_ARCS,
            cycles_checked: checked,
            nonzero_cycles: bad,
            closure_only_arcs: closure_only,
        }
    } else {
        CycleReport { performed: false, max_arcs: AUDIT_MAX_ARCS, cycles_checked: 0, nonzero_cycles: 0, closure_only_arcs: 0 }
    };
    let payments = mech.to_json()["payments"]
        .as_object()
        .expect("payments object")
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().expect("string").to_string()))
        .collect();
    Ok(AnalyzeReport {
        schema: REPORT_SCHEMA,
        items: mech.items(),
        payments,
        subdivision: SubdivisionReport {
            cells: sub.cells().iter().map(|c| c.indices().to_vec()).collect(),
            regular: regularity.regular,
            witness_reproduces: regularity.witness.is_some(),
        },
        facets: complex.facet_labels(),
        nondegenerate: sub.is_triangulation()?,
        sensitivity: SensitivityReport { cardinality: cardinality_sensitivity(&sub), hamming: hamming_sensitivity(&sub) },
        tight_span: TightSpanReport {
            vertices: ts.vertices.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
            edges: ts.edges.iter().map(|&(a, b)| [a, b]).collect(),
        },
        complex_verified,
        zero_cycle_audit,
    })
}
