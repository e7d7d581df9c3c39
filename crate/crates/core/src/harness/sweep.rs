use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Analysis, ScenarioConfig, StructureChoice};
use super::scenario::optimum;
use crate::closed_form::{compare_structures, CaseId, CaseLabel, ComparisonReport, Structure, StructureOptimum};
use crate::equilibrium::nash_gap;
use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::model::fluid_rewards;

pub const CSV_HEADER: [&str; 12] = [
    "eta",
    "structure",
    "case",
    "alpha_core",
    "alpha_other",
    "g_max",
    "nash_predicted",
    "nash_gap",
    "g_max_other_structure",
    "inequality_holds",
    "in_stable_regime",
    "small_core_bound_holds",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eta: f64,
    pub primary: StructureOptimum,
    pub other: StructureOptimum,
    pub case: CaseLabel,
    pub comparison: ComparisonReport,
    /// Present when a nash check was requested and eta * n is integral.
    pub nash_gap: Option<f64>,
}

impl SweepRow {
    pub fn celebrity(&self) -> &StructureOptimum {
        if self.primary.structure == Structure::Celebrity {
            &self.primary
        } else {
            &self.other
        }
    }

    pub fn uniform(&self) -> &StructureOptimum {
        if self.primary.structure == Structure::Uniform {
            &self.primary
        } else {
            &self.other
        }
    }

    fn record(&self) -> [String; 12] {
        let p = &self.primary;
        [
            self.eta.to_string(),
            p.structure.as_str().to_owned(),
            self.case.id.as_str().to_owned(),
            p.alpha_core.to_string(),
            p.alpha_other.to_string(),
            p.g_max.to_string(),
            p.nash_predicted.to_string(),
            self.nash_gap.map(|g| g.to_string()).unwrap_or_default(),
            self.other.g_max.to_string(),
            self.comparison.inequality_holds.to_string(),
            self.comparison.in_stable_regime.to_string(),
            p.small_core_bound_holds.to_string(),
        ]
    }
}

fn primary_structure(choice: StructureChoice) -> Structure {
    match choice {
        StructureChoice::Uniform => Structure::Uniform,
        _ => Structure::Celebrity,
    }
}

fn other_structure(s: Structure) -> Structure {
    match s {
        Structure::Celebrity => Structure::Uniform,
        Structure::Uniform => Structure::Celebrity,
    }
}

/// Closed-form rows for every sweep point, in eta order. With
/// `structure = both` the celebrity structure is the primary one.
pub fn sweep_rows(exec: Execution, cfg: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    let etas = cfg.eta.points();
    let primary = primary_structure(cfg.structure);
    let check = cfg.analyses.contains(&Analysis::NashCheck);
    let s = &cfg.settings;
    let rows = exec.map_indexed(etas.len(), |k| -> Result<SweepRow> {
        let eta = etas[k];
        let p = optimum(primary, &cfg.params, eta)?;
        let other = optimum(other_structure(primary), &cfg.params, eta)?;
        let comparison = compare_structures(&cfg.params, eta)?;
        let nash_gap = match (check, p.is_integral(), s.grid_points, s.eps) {
            (true, true, Some(g), Some(eps)) => {
                let graph = primary.graph(cfg.params.n, eta)?;
                Some(nash_gap(&graph, &cfg.params, &p.profile, g, eps)?.max_gap)
            }
            _ => None,
        };
        Ok(SweepRow {
            eta,
            case: comparison.celebrity_case,
            primary: p,
            other,
            comparison,
            nash_gap,
        })
    });
    rows.into_iter().collect()
}

/// Re-evaluates both g_max columns of up to three seeded random integral
/// rows through the fluid model.
pub fn spot_check(rows: &[SweepRow], cfg: &ScenarioConfig) -> Result<Vec<usize>> {
    let integral: Vec<usize> = (0..rows.len()).filter(|&k| rows[k].primary.is_integral()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.settings.seed.unwrap_or(0));
    let mut picked: Vec<usize> = sample(&mut rng, integral.len(), integral.len().min(3))
        .into_iter()
        .map(|i| integral[i])
        .collect();
    picked.sort_unstable();
    for &k in &picked {
        let row = &rows[k];
        for opt in [&row.primary, &row.other] {
            let graph = opt.structure.graph(cfg.params.n, row.eta)?;
            let w = fluid_rewards(&graph, &cfg.params, &opt.profile)?.welfare;
            if (w - opt.g_max).abs() > 1e-9 * opt.g_max.abs().max(1.0) {
                return Err(domain(format!(
                    "spot check failed at eta = {}: {} g_max {} but fluid welfare {}",
                    row.eta,
                    opt.structure.as_str(),
                    opt.g_max,
                    w
                )));
            }
        }
    }
    Ok(picked)
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

/// Contiguous eta ranges sharing one case label.
pub fn case_bands(rows: &[SweepRow]) -> Vec<(CaseId, f64, f64)> {
    let mut bands: Vec<(CaseId, f64, f64)> = Vec::new();
    for row in rows {
        match bands.last_mut() {
            Some(b) if b.0 == row.case.id => b.2 = row.eta,
            _ => bands.push((row.case.id, row.eta, row.eta)),
        }
    }
    bands
}
