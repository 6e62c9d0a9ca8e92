//! One function per subcommand: effective configuration in, table out.

use nhqubit::dynamics::{Termination, Trajectory};
use nhqubit::spectrum::{classify_phase, DEFAULT_PHASE_EPSILON};
use nhqubit::{
    analyze, build_jump_ops, build_total_h, evolve_master, evolve_pure, find_ep, normalize, sweep_phase_diagram,
    Complex64 as C64, Linspace, TimeGrid,
};
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::output::{Cell, ResultTable, Table};
use crate::CliError;

/// A finished table, plus the failure that cut it short if any.
#[derive(Debug)]
pub struct Report {
    pub result: ResultTable,
    pub failure: Option<CliError>,
}

fn header(command: &str, c: &ScenarioConfig) -> ResultTable {
    let mut r = ResultTable::default();
    r.meta("tool", format!("nhqubit {}", env!("CARGO_PKG_VERSION")));
    r.meta("command", command);
    r.meta("config", c.to_json());
    r
}

fn grid(c: &ScenarioConfig) -> Result<TimeGrid, CliError> {
    Ok(TimeGrid::uniform(c.t_max, c.n_samples)?)
}

fn note_termination(r: &mut ResultTable, tr: &Trajectory, requested: usize) -> Option<CliError> {
    r.meta("samples_written", format!("{} of {requested}", tr.len()));
    match tr.termination {
        Some(Termination::FullDecay { time, survival }) => {
            let msg = format!("full decay at t = {time} us (survival {survival:.3e}); trajectory truncated");
            r.meta("termination", &msg);
            Some(CliError::Numerical(msg))
        }
        None => {
            r.meta("termination", "completed");
            None
        }
    }
}

/// Columns `t, P1, P2, P3, P4, norm, concurrence`.
pub fn cmd_evolve(c: &ScenarioConfig) -> Result<Report, CliError> {
    let g = grid(c)?;
    let h = build_total_h(&c.params)?;
    let psi0 = c.initial_state.to_state()?;
    let tr = evolve_pure(&h, &psi0, &g, c.method)?;

    let mut r = header("evolve", c);
    let failure = note_termination(&mut r, &tr, g.len());
    let mut t = Table::new("evolve", &["t", "P1", "P2", "P3", "P4", "norm", "concurrence"]);
    for k in 0..tr.len() {
        let p = tr.populations[k];
        t.push(vec![
            tr.times[k].into(),
            p[0].into(),
            p[1].into(),
            p[2].into(),
            p[3].into(),
            tr.survival[k].sqrt().into(),
            tr.concurrence[k].into(),
        ]);
    }
    r.tables.push(t);
    Ok(Report { result: r, failure })
}

/// Columns `t, P, P1, P2, P3, P4, concurrence` with `P = Tr ρ`.
pub fn cmd_master(c: &ScenarioConfig) -> Result<Report, CliError> {
    let g = grid(c)?;
    let h = build_total_h(&c.params)?;
    let jumps = build_jump_ops(&c.params)?;
    let rho0 = normalize(&c.initial_state.to_state()?)?.to_density();
    let tr = evolve_master(&h, &jumps, &rho0, &g, c.method)?;

    let mut r = header("master", c);
    let failure = note_termination(&mut r, &tr, g.len());
    let mut t = Table::new("master", &["t", "P", "P1", "P2", "P3", "P4", "concurrence"]);
    for k in 0..tr.len() {
        let p = tr.populations[k];
        t.push(vec![
            tr.times[k].into(),
            tr.survival[k].into(),
            p[0].into(),
            p[1].into(),
            p[2].into(),
            p[3].into(),
            tr.concurrence[k].into(),
        ]);
    }
    r.tables.push(t);
    Ok(Report { result: r, failure })
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Reorders `next` so that entry `i` continues the branch `prev[i]`.
pub fn track(prev: &[C64; 4], next: &[C64; 4]) -> [C64; 4] {
    let best = permutations4()
        .into_iter()
        .min_by(|p, q| {
            let cost = |p: &[usize; 4]| (0..4).map(|i| (next[p[i]] - prev[i]).norm_sqr()).sum::<f64>();
            cost(p).total_cmp(&cost(q))
        })
        .expect("24 permutations");
    best.map(|k| next[k])
}

/// Columns `gamma, re1..re4, im1..im4, max_im_spread, phase_label`, with
/// eigenvalue branches followed continuously across γ.
pub fn cmd_spectrum(c: &ScenarioConfig) -> Result<Report, CliError> {
    let s = &c.spectrum;
    let axis = Linspace::new(s.gamma_range[0], s.gamma_range[1], s.gamma_points)?;
    let gammas = axis.values();
    let spectra: Vec<_> = gammas.par_iter().map(|&g| analyze(&c.params.with_gamma(g))).collect();

    let mut r = header("spectrum", c);
    let mut t = Table::new(
        "spectrum",
        &["gamma", "re1", "re2", "re3", "re4", "im1", "im2", "im3", "im4", "max_im_spread", "phase_label"],
    );
    let mut prev: Option<[C64; 4]> = None;
    let mut flagged = 0;
    for (g, res) in gammas.iter().zip(spectra) {
        match res {
            Ok(sp) => {
                let ev = match &prev {
                    Some(p) => track(p, &sp.eigenvalues),
                    None => sp.eigenvalues,
                };
                prev = Some(ev);
                let label = classify_phase(&sp, DEFAULT_PHASE_EPSILON).phase.to_string();
                let mut row: Vec<Cell> = vec![(*g).into()];
                row.extend(ev.iter().map(|l| Cell::Num(l.re)));
                row.extend(ev.iter().map(|l| Cell::Num(l.im)));
                row.push(sp.max_im_spread.into());
                row.push(label.into());
                t.push(row);
            }
            Err(e) => {
                flagged += 1;
                r.meta("flagged", format!("gamma = {g}: {e}"));
                let mut row: Vec<Cell> = vec![(*g).into()];
                row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 9));
                row.push("error".into());
                t.push(row);
            }
        }
    }
    r.meta("flagged_rows", flagged);
    r.tables.push(t);
    Ok(Report { result: r, failure: None })
}

/// Long-format `omega, gamma, phase_label, max_im_spread` cells and a second
/// table of `omega, gamma_ep` boundary samples.
pub fn cmd_phase_diagram(c: &ScenarioConfig) -> Result<Report, CliError> {
    let s = &c.phase_diagram;
    let omega = Linspace::new(s.omega_range[0], s.omega_range[1], s.omega_points)?;
    let gamma = Linspace::new(s.gamma_range[0], s.gamma_range[1], s.gamma_points)?;
    let d = sweep_phase_diagram(&c.params, omega, gamma)?;

    let mut r = header("phase-diagram", c);
    let mut cells = Table::new("phase", &["omega", "gamma", "phase_label", "max_im_spread"]);
    let mut unclassified = 0;
    for (i, w) in d.omega.iter().enumerate() {
        for (j, g) in d.gamma.iter().enumerate() {
            let (label, spread) = match d.label(i, j) {
                Some(l) => (l.phase.to_string(), l.criterion),
                None => {
                    unclassified += 1;
                    ("unclassified".to_string(), f64::NAN)
                }
            };
            cells.push(vec![(*w).into(), (*g).into(), label.into(), spread.into()]);
        }
    }
    r.meta("unclassified_cells", unclassified);
    let mut boundary = Table::new("ep_boundary", &["omega", "gamma_ep"]);
    for (w, g) in &d.ep_boundary {
        boundary.push(vec![(*w).into(), (*g).into()]);
    }
    r.tables.push(cells);
    r.tables.push(boundary);
    Ok(Report { result: r, failure: None })
}

/// Single-row report of the exceptional point inside `ep.bracket`.
pub fn cmd_ep(c: &ScenarioConfig) -> Result<Report, CliError> {
    let [lo, hi] = c.ep.bracket;
    let ep = find_ep(&c.params, lo, hi)?;
    let mut r = header("ep", c);
    let mut t = Table::new("ep", &["gamma_ep", "min_gap", "iterations", "bracket_lo", "bracket_hi"]);
    t.push(vec![ep.gamma.into(), ep.min_gap.into(), Cell::Text(ep.iterations.to_string()), ep.lo.into(), ep.hi.into()]);
    r.tables.push(t);
    Ok(Report { result: r, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn there_are_24_permutations() {
        let p = permutations4();
        assert_eq!(p.len(), 24);
        assert!(p.contains(&[3, 2, 1, 0]));
    }

    #[test]
    fn tracking_follows_nearest_branch() {
        let prev = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        let next = [C64::new(3.1, 0.0), C64::new(0.1, 0.0), C64::new(2.1, 0.0), C64::new(0.9, 0.0)];
        let t = track(&prev, &next);
        assert_eq!(t, [next[1], next[3], next[2], next[0]]);
    }
}
