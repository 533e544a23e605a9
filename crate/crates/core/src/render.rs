//! Human-readable text output.

use std::fmt::Write;

use crate::balancing::{BalancingRelation, BalancingReport, TermGroup};
use crate::fan::{BergmanFan, FlagOfFlats};
use crate::matroid::Matroid;
use crate::weighted::WeightCheck;

pub fn flag_text(m: &Matroid, flag: &FlagOfFlats) -> String {
    let parts: Vec<String> = flag.flats().iter().map(|f| m.ground().format_set(f.set())).collect();
    format!("({})", parts.join(","))
}

/// The lattice of flats rank by rank, followed by its cover edges.
pub fn render_lattice(m: &Matroid) -> String {
    let g = m.ground();
    let mut out = String::new();
    for r in 0..=m.rank() {
        let row: Vec<String> = m.flats().iter().filter(|f| f.rank() == r).map(|f| g.format_set(f.set())).collect();
        writeln!(out, "rank {r}: {}", row.join(" ")).unwrap();
    }
    let edges: Vec<String> = m
        .flats()
        .iter()
        .flat_map(|f| {
            m.covers_of(f)
                .expect("lattice flat")
                .into_iter()
                .map(move |c| format!("  {} -> {}", g.format_set(f.set()), g.format_set(c.set())))
        })
        .collect();
    writeln!(out, "cover edges: {}", edges.len()).unwrap();
    for e in edges {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn render_fan(fan: &BergmanFan) -> String {
    let m = fan.matroid();
    let mut out = String::new();
    writeln!(out, "Bergman fan of a rank-{} matroid on {} elements: {} cones", m.rank(), m.n(), fan.num_cones())
        .unwrap();
    writeln!(out, "{:<16} {:>4} {:>8}", "type", "dim", "cones").unwrap();
    for (t, n) in fan.counts_by_type() {
        writeln!(out, "{:<16} {:>4} {:>8}", t.to_string(), t.dim(), n).unwrap();
    }
    writeln!(out, "cones:").unwrap();
    for c in fan.all_cones() {
        writeln!(out, "  {} {}", c.cone_type, flag_text(m, &c.flag)).unwrap();
    }
    out
}

pub fn render_relation(m: &Matroid, rel: &BalancingRelation) -> String {
    let g = m.ground();
    let mut out = String::new();
    let kind = if rel.is_nontrivial() { "nontrivial" } else { "degenerate" };
    writeln!(
        out,
        "({},{})-balancing at fc_{} [type {}, {kind}]",
        rel.i,
        rel.k,
        flag_text(m, &rel.flag),
        rel.flag.cone_type()
    )
    .unwrap();
    for t in &rel.terms {
        let sign = if t.coefficient < 0 { "-" } else { "+" };
        let chain: Vec<String> = t.chain.iter().map(|&s| g.format_set(s)).collect();
        let group = match t.group {
            TermGroup::Chains => "chain".to_string(),
            TermGroup::Alternating(l) => format!("l={l}"),
            TermGroup::Closing => "closing".to_string(),
        };
        writeln!(
            out,
            "  {sign} (e{} - e{})    [{group}: {}]",
            g.format_set(t.plus),
            g.format_set(t.minus),
            chain.join(" < ")
        )
        .unwrap();
    }
    writeln!(out, "  = {}", rel.lhs).unwrap();
    out
}

pub fn render_report(m: &Matroid, report: &BalancingReport) -> String {
    let mut out = String::new();
    for (t, counts) in &report.by_type {
        let parts: Vec<String> = counts.iter().map(|((i, k), n)| format!("(i={i},k={k}) x{n}")).collect();
        writeln!(out, "{t}: {}", parts.join(", ")).unwrap();
    }
    let types: Vec<String> = report.nontrivial_types.iter().map(ToString::to_string).collect();
    writeln!(out, "nontrivial relations at types: {}", types.join(", ")).unwrap();
    for rel in &report.violations {
        out.push_str("VIOLATION ");
        out.push_str(&render_relation(m, rel));
    }
    for (flag, i) in &report.codim1_failures {
        writeln!(out, "CODIM-1 FAILURE at {} i={i}", flag_text(m, flag)).unwrap();
    }
    writeln!(out, "codim-1 sums checked: {}, failures: {}", report.codim1_checked, report.codim1_failures.len())
        .unwrap();
    writeln!(out, "relations checked: {}, violations: {}", report.relations_checked, report.violations.len()).unwrap();
    out
}

pub fn render_weight_check(m: &Matroid, check: &WeightCheck) -> String {
    let mut out = String::new();
    for c in &check.checks {
        let status = if c.balanced { "ok  " } else { "FAIL" };
        writeln!(out, "{status} {} sum {}", flag_text(m, &c.face), c.sum).unwrap();
    }
    let failed = check.failures().count();
    writeln!(out, "boundary cones checked: {}, unbalanced: {failed}", check.checks.len()).unwrap();
    out
}
