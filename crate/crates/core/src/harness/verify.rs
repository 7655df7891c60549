use std::fmt;
use std::str::FromStr;

use crate::analysis::probes::{
    collision_check, dominance_probe, martingale_probe, potential_drift_check,
    step_distribution_check, DominanceProbe, MartingaleProbe, DISTRIBUTION_ALPHA, MEAN_SIGMAS,
};
use crate::analysis::Report;
use crate::error::{Error, Result};
use crate::model::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Preset {
    /// Trial counts of the acceptance criteria.
    #[default]
    PaperDefaults,
    /// Roughly a tenth of the work; for smoke tests.
    Quick,
}

impl Preset {
    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::PaperDefaults => "paper-defaults",
            Preset::Quick => "quick",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-defaults" | "default" => Ok(Preset::PaperDefaults),
            "quick" => Ok(Preset::Quick),
            _ => Err(Error::Parse(format!(
                "unknown preset {s:?} (paper-defaults, quick)"
            ))),
        }
    }
}

/// Sizes of every check in a verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyPlan {
    pub seed: u64,
    pub martingale: MartingaleProbe,
    /// Same probe in a regime where the concentration bound is small.
    pub concentration: MartingaleProbe,
    /// Exceedance rate the second regime must stay below.
    pub concentration_limit: f64,
    pub collision_snapshots: usize,
    pub collision_max_n: usize,
    pub potential_snapshots: usize,
    pub potential_steps: usize,
    pub potential_max_n: usize,
    pub dominance: DominanceProbe,
    pub step_params: ModelParams,
    pub step_samples: u64,
}

impl VerifyPlan {
    pub fn preset(preset: Preset, seed: u64) -> Self {
        let scale = match preset {
            Preset::PaperDefaults => 1,
            Preset::Quick => 10,
        };
        let martingale = MartingaleProbe {
            n: 10,
            r: 4,
            k: 80,
            neutral_position: 0,
            steps: 200,
            trials: 2000 / scale,
            seed,
        };
        Self {
            seed,
            concentration: MartingaleProbe {
                k: 800,
                seed: seed.wrapping_add(1),
                ..martingale.clone()
            },
            martingale,
            concentration_limit: 0.08,
            collision_snapshots: 100,
            collision_max_n: 12,
            potential_snapshots: 20,
            potential_steps: 10_000 / scale,
            potential_max_n: 16,
            dominance: DominanceProbe {
                n: 5,
                r: 3,
                k: 30,
                steps: 100,
                trials: 5000 / scale,
                seed: seed.wrapping_add(2),
                alpha: DISTRIBUTION_ALPHA,
            },
            step_params: ModelParams::new(8, 3, 24).expect("valid"),
            step_samples: 20_000 / scale as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub bound: String,
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:width$}  measured {}  vs  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.bound
            ));
        }
        out
    }
}

pub fn verify(plan: &VerifyPlan) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    let m = martingale_probe(&plan.martingale)?;
    let max_z = m
        .mean_drift
        .iter()
        .zip(&m.std_error)
        .map(|(d, se)| if *se > 0.0 { (d / se).abs() } else { 0.0 })
        .fold(0.0, f64::max);
    checks.push(CheckResult {
        name: "martingale drift",
        passed: m.drift_ok(MEAN_SIGMAS),
        measured: format!("max |mean|/SE = {max_z:.3}"),
        bound: format!("{MEAN_SIGMAS}"),
        report: m.to_report(),
    });
    checks.push(CheckResult {
        name: "concentration",
        passed: m.exceedance_ok(3.0),
        measured: format!("exceedance {:.4}", m.max_exceedance()),
        bound: format!("bound + 3 SE = {:.4}", m.exceedance_allowance(3.0)),
        report: m.to_report(),
    });

    let c = martingale_probe(&plan.concentration)?;
    checks.push(CheckResult {
        name: "concentration (large K)",
        passed: c.exceedance_ok(3.0) && c.max_exceedance() < plan.concentration_limit,
        measured: format!("exceedance {:.4}", c.max_exceedance()),
        bound: format!("< {} (bound {:.3e})", plan.concentration_limit, c.bound),
        report: c.to_report(),
    });

    let col = collision_check(
        plan.collision_snapshots,
        plan.collision_max_n,
        plan.seed.wrapping_add(3),
    );
    checks.push(CheckResult {
        name: "collision lower bound",
        passed: col.passed(),
        measured: format!("min(exact - bound) = {:.4}", col.min_slack()),
        bound: ">= 0".into(),
        report: col.to_report(),
    });

    let pot = potential_drift_check(
        plan.potential_snapshots,
        plan.potential_steps,
        plan.potential_max_n,
        plan.seed.wrapping_add(4),
    )?;
    let worst = pot
        .cases
        .iter()
        .map(|c| (c.mean_drop - c.bound) / c.std_error.max(f64::MIN_POSITIVE))
        .fold(f64::INFINITY, f64::min);
    checks.push(CheckResult {
        name: "potential drift",
        passed: pot.passed(),
        measured: format!("min (mean - bound)/SE = {worst:.2}"),
        bound: format!(">= -{MEAN_SIGMAS}"),
        report: pot.to_report(),
    });

    let dom = dominance_probe(&plan.dominance)?;
    checks.push(CheckResult {
        name: "dominance",
        passed: !dom.violated(),
        measured: format!("max CDF excess {:.4}", dom.max_violation),
        bound: format!("KS tolerance {:.4}", dom.tolerance),
        report: dom.to_report(),
    });

    let steps = step_distribution_check(
        plan.step_params,
        plan.step_samples,
        plan.seed.wrapping_add(5),
    );
    checks.push(CheckResult {
        name: "step distributions",
        passed: steps.passed(),
        measured: format!("max |z| = {:.3}", steps.max_abs_z()),
        bound: format!("{MEAN_SIGMAS}"),
        report: steps.to_report(),
    });

    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!("quick".parse::<Preset>().unwrap(), Preset::Quick);
        assert_eq!(
            "paper-defaults".parse::<Preset>().unwrap(),
            Preset::PaperDefaults
        );
        assert!("full".parse::<Preset>().is_err());
        let p = VerifyPlan::preset(Preset::PaperDefaults, 1);
        assert_eq!(p.martingale.trials, 2000);
        assert_eq!(p.dominance.trials, 5000);
        assert_eq!(p.concentration.k, 800);
    }

    #[test]
    fn quick_preset_passes() {
        let rep = verify(&VerifyPlan::preset(Preset::Quick, 11)).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        assert_eq!(rep.checks.len(), 7);
        assert_eq!(rep.summary().lines().count(), 7);
    }
}
