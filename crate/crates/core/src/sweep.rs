//! Batch verification: generate instances over a seed range, verify each
//! against one or more theorems, and emit one CSV row per pair.

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::generators::{gen_planted, Family, GenParams};
use crate::optimizer::SolverConfig;
use crate::par;
use crate::theorems::{verify, TheoremId, TheoremParams, TheoremVerdict};

pub const CSV_HEADER: [&str; 13] = [
    "family",
    "seed",
    "theorem",
    "t",
    "r",
    "m",
    "hypotheses_ok",
    "closed_form",
    "numerical",
    "uniform_on_clique",
    "kkt_residual",
    "pass",
    "wall_ms",
];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub gen: GenParams,
    /// Theorems to check; the family's target when empty.
    pub theorems: Vec<TheoremId>,
    /// Overrides the parameters derived from `gen`.
    pub params: Option<TheoremParams>,
    pub seeds: RangeInclusive<u64>,
    pub tol: f64,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub seed: u64,
    pub verdict: TheoremVerdict,
    pub wall_ms: f64,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let v = &self.verdict;
        let opt = |x: Option<f64>| x.map(|x| format!("{x:.12}")).unwrap_or_default();
        let opt_u = |x: Option<usize>| x.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.family.to_string(),
            self.seed.to_string(),
            v.id.to_string(),
            opt_u(v.t),
            opt_u(v.r),
            v.m.to_string(),
            v.hypotheses_ok.to_string(),
            opt(v.closed_form),
            opt(v.numerical),
            opt(v.uniform_on_clique),
            opt(v.kkt_residual),
            v.pass.to_string(),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

/// Runs the sweep. Instances are processed concurrently when the solver
/// config allows it; rows come back ordered by seed, then theorem.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let theorems = if spec.theorems.is_empty() {
        spec.family.target(&spec.gen).into_iter().collect()
    } else {
        spec.theorems.clone()
    };
    let params = spec.params.clone().unwrap_or_else(|| spec.gen.theorem_params(spec.family));
    let seeds: Vec<u64> = spec.seeds.clone().collect();
    let per_seed = par::map_slice(&seeds, spec.solver.parallel, |&seed| -> Result<Vec<SweepRow>> {
        let h = gen_planted(spec.family, &spec.gen, seed)?;
        let cfg = SolverConfig { seed, ..spec.solver.clone() };
        theorems
            .iter()
            .map(|&id| {
                let start = Instant::now();
                let verdict = verify(id, &h, &params, &cfg, spec.tol)?;
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                Ok(SweepRow { family: spec.family, seed, verdict, wall_ms })
            })
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_seed_order() {
        let spec = SweepSpec {
            family: Family::T6a,
            gen: GenParams { t: Some(4), r: Some(3), n: Some(5), ..GenParams::default() },
            theorems: vec![TheoremId::TwoRT6a, TheoremId::Cor1a],
            params: None,
            seeds: 1..=3,
            tol: 1e-6,
            solver: SolverConfig { starts: 8, ..SolverConfig::default() },
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 6);
        let order: Vec<(u64, TheoremId)> = rows.iter().map(|r| (r.seed, r.verdict.id)).collect();
        assert_eq!(order[0], (1, TheoremId::TwoRT6a));
        assert_eq!(order[5], (3, TheoremId::Cor1a));
        assert!(rows.iter().filter(|r| r.verdict.id == TheoremId::TwoRT6a).all(|r| r.verdict.pass));

        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 7);
    }
}
