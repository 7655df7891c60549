use crate::analysis::{
    collision_probability_bound, neutral_concentration_bound, potential_drift_bound,
    runtime_bound_shape, single_frequency_drift_bound, weak_preference_bound, BoundQuery, Table,
};
use crate::error::Result;

/// Every closed-form bound over the grid `ns x rs x ks x ts`, evaluated at
/// the uniform model (all `p_{i,r-1} = 1/r`).
pub fn bounds_table(ns: &[usize], rs: &[usize], ks: &[u32], ts: &[u64]) -> Result<Table> {
    let mut table = Table::new(
        "bounds",
        &[
            "n",
            "r",
            "K",
            "T",
            "neutral_tail",
            "weak_pref_tail",
            "collision_lb",
            "freq_drift_lb",
            "potential_drift_lb",
            "runtime_shape",
        ],
    );
    let sci = |v: f64| format!("{v:.4e}");
    for &n in ns {
        for &r in rs {
            let uniform = vec![1.0 / r as f64; n];
            let phi = n as f64 * (1.0 - 1.0 / r as f64);
            for &k in ks {
                for &t in ts {
                    let q = BoundQuery::new(n, r, k, t)?;
                    let freq_drift =
                        single_frequency_drift_bound(&uniform, 0, k).map_or("n/a".to_string(), sci);
                    let potential = potential_drift_bound(phi, 1.0 / r as f64, k)
                        .map_or("n/a".to_string(), sci);
                    table.push_row(vec![
                        n.to_string(),
                        r.to_string(),
                        k.to_string(),
                        t.to_string(),
                        sci(neutral_concentration_bound(&q)),
                        sci(weak_preference_bound(&q)),
                        format!("{:.6}", collision_probability_bound(&uniform, 0)),
                        freq_drift,
                        potential,
                        sci(runtime_bound_shape(n, r, k)),
                    ]);
                }
            }
        }
    }
    Ok(table)
}
