//! The invariant suite behind `verify`: every closed form is checked against an
//! independent route (enumeration, the moduli oracle, tangent construction,
//! quadrature), with the measured residual reported next to its threshold.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::configuration::{CriticalConfiguration, Tolerances};
use crate::direct::{limit_membership, limit_membership_cofinal, DirectSystem, DyadicLevel, SystemKind};
use crate::domain::{dyadic, BallSpec, Branch};
use crate::error::Result;
use crate::geometry::{power_sum, Vec2};
use crate::hexagon::{circumscribed_for, inscribed_for};
use crate::lattice::{admissibility_check, contact_points, critical_lattice, CriticalLatticeKind};
use crate::moduli::{lattice_determinant, moduli_curve, oracle_min};
use crate::packing::{ball_area, packing_report, verify_packing_lattice};
use crate::solvers::{solve_davis_constant, CriticalConstants};

/// Exponents at which the moduli oracle is compared against the closed forms.
pub const ORACLE_EXPONENTS: [f64; 11] = [1.1, 1.5, 1.9, 2.0, 2.2, 2.5, 2.5725, 2.8, 3.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub level: VerifyLevel,
    /// Added to every computed `τ_p`. Nonzero values must make the suite fail.
    pub tau_perturbation: f64,
    pub tolerances: Tolerances,
}

impl VerifyOptions {
    pub fn new(level: VerifyLevel) -> Self {
        VerifyOptions {
            level,
            tau_perturbation: 0.0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest measured deviation.
    pub residual: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<24} residual {:.6e} (limit {:.1e})  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.threshold,
                c.detail
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

/// Tracks the worst residual of one check; a computation error fails the check.
struct Tally {
    name: &'static str,
    threshold: f64,
    residual: f64,
    ok: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, threshold: f64) -> Self {
        Tally { name, threshold, residual: 0.0, ok: true, notes: Vec::new() }
    }

    fn residual(&mut self, r: f64) {
        if !(r < self.threshold) {
            self.ok = false;
        }
        if r.is_nan() || r > self.residual {
            self.residual = r;
        }
    }

    fn require(&mut self, cond: bool, note: impl FnOnce() -> String) {
        if !cond {
            self.ok = false;
            self.notes.push(note());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, outcome: Result<()>) -> Check {
        let mut notes = self.notes;
        let ok = self.ok && outcome.is_ok();
        if let Err(e) = outcome {
            notes.push(format!("error: {e}"));
        }
        Check {
            name: self.name,
            passed: ok,
            residual: self.residual,
            threshold: self.threshold,
            detail: notes.join("; "),
        }
    }
}

fn run_check(name: &'static str, threshold: f64, body: impl FnOnce(&mut Tally) -> Result<()>) -> Check {
    let mut t = Tally::new(name, threshold);
    let outcome = body(&mut t);
    t.finish(outcome)
}

struct Suite {
    opts: VerifyOptions,
    p0: f64,
}

impl Suite {
    fn constants(&self, p: f64) -> Result<CriticalConstants> {
        let c = CriticalConstants::new(p, self.opts.tolerances.root)?;
        Ok(if self.opts.tau_perturbation != 0.0 {
            c.perturbed_tau(self.opts.tau_perturbation)
        } else {
            c
        })
    }

    fn config(&self, p: f64, m: u32) -> Result<CriticalConfiguration> {
        CriticalConfiguration::from_constants(BallSpec::new(p, m)?, self.constants(p)?, self.p0)
    }

    fn full(&self) -> bool {
        self.opts.level == VerifyLevel::Full
    }

    /// `n` exponents spread over `(1, 10]`.
    fn exponent_grid(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|i| 1.0 + 9.0 * i as f64 / n as f64).collect()
    }
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let p0 = match solve_davis_constant(opts.tolerances.davis) {
        Ok(p0) => p0,
        Err(e) => {
            checks.push(Check {
                name: "davis_constant",
                passed: false,
                residual: f64::NAN,
                threshold: 1e-3,
                detail: format!("error: {e}"),
            });
            return VerifyReport { checks };
        }
    };
    let suite = Suite { opts: *opts, p0 };

    checks.push(run_check("davis_constant", 1e-3, |t| {
        t.residual((p0 - 2.5725).abs());
        t.require(p0 > 2.57 && p0 < 2.58, || format!("p0 = {p0} outside (2.57, 2.58)"));
        let c = suite.constants(p0)?;
        t.require((c.delta0 - c.delta1).abs() < opts.tolerances.davis.max(1e-10), || {
            format!("branch gap {:e} at p0", (c.delta0 - c.delta1).abs())
        });
        t.note(format!("davis_constant ≈ {p0:.4} (p0 = {p0:.10})"));
        Ok(())
    }));

    checks.push(run_check("branch_coincidence", 1e-9, |t| {
        let c = suite.constants(2.0)?;
        t.residual((c.delta0 - c.delta1).abs());
        let (delta, _) = crate::solvers::critical_determinant(BallSpec::new(2.0, 0)?, &c, p0)?;
        let gap = (delta - 3f64.sqrt() / 2.0).abs();
        t.require(gap < 1e-12, || format!("Δ(D_2) off √3/2 by {gap:e}"));
        let c0 = suite.constants(p0)?;
        t.residual((c0.delta0 - c0.delta1).abs());
        Ok(())
    }));

    checks.push(run_check("diamond", 1e-10, |t| {
        let config = suite.config(1.0, 0)?;
        let gap = (config.critical_determinant - 0.5).abs();
        t.require(config.branch == Branch::Delta1 && gap < 1e-12, || format!("Δ(D_1) off 1/2 by {gap:e}"));
        t.residual(gap);
        let report = packing_report(&config, &opts.tolerances)?;
        t.residual((report.density - 1.0).abs());
        Ok(())
    }));

    checks.push(run_check("circle_density", 1e-9, |t| {
        let report = packing_report(&suite.config(2.0, 0)?, &opts.tolerances)?;
        t.residual((report.density - PI / 12f64.sqrt()).abs());
        t.note(format!("density(2) = {:.6}", report.density));
        Ok(())
    }));

    checks.push(run_check("oracle_equivalence", 1e-6, |t| {
        let (exponents, grid): (Vec<f64>, usize) = if suite.full() {
            (ORACLE_EXPONENTS.to_vec(), 1000)
        } else {
            (vec![1.5, 2.2, 3.0], 200)
        };
        for p in exponents {
            let config = suite.config(p, 0)?;
            let o = oracle_min(p, grid)?;
            t.residual((o.delta_star - config.critical_determinant).abs());
            let c = config.constants;
            if (c.delta0 - c.delta1).abs() > 1e-9 {
                t.require(o.endpoint_branch() == Some(config.branch), || {
                    format!("p = {p}: minimizer σ* = {} does not sit on the {} endpoint", o.sigma_star, config.branch)
                });
            }
        }
        Ok(())
    }));

    checks.push(run_check("contacts_admissibility", 1e-9, |t| {
        let n = if suite.full() { 50 } else { 10 };
        for p in suite.exponent_grid(n) {
            let c = suite.constants(p)?;
            for m in 0..=2 {
                let spec = BallSpec::new(p, m)?;
                for kind in [CriticalLatticeKind::Lambda0, CriticalLatticeKind::Lambda1] {
                    let lattice = critical_lattice(p, kind, m, &c)?;
                    for z in contact_points(&lattice) {
                        t.residual((power_sum(p, z.scale(1.0 / spec.scale())) - 1.0).abs());
                    }
                    let adm = admissibility_check(&lattice, &spec, opts.tolerances.contact)?;
                    t.require(adm.is_admissible && adm.boundary_pairs == 3, || {
                        format!("p = {p}, m = {m}, {}: admissible {}, {} pairs", kind.name(), adm.is_admissible, adm.boundary_pairs)
                    });
                    let shrunk = admissibility_check(&lattice.scaled(0.99)?, &spec, opts.tolerances.contact)?;
                    t.require(!shrunk.is_admissible, || format!("p = {p}, m = {m}: shrunk lattice admissible"));
                }
            }
        }
        Ok(())
    }));

    checks.push(run_check("moduli_consistency", 1e-12, |t| {
        let nodes = if suite.full() { 101 } else { 21 };
        for p in [1.5, 2.2, 3.0, 6.0] {
            for pt in moduli_curve(p, nodes, opts.tolerances.root)? {
                t.residual((lattice_determinant(&pt)? - pt.delta).abs());
                let lattice = crate::lattice::build_lattice(p, pt.tau, pt.sigma, 0)?;
                let adm = admissibility_check(&lattice, &BallSpec::new(p, 0)?, 1e-9)?;
                t.require(adm.is_admissible, || format!("p = {p}, σ = {}: moduli lattice not admissible", pt.sigma));
            }
        }
        Ok(())
    }));

    checks.push(run_check("hexagon_identities", 1e-6, |t| {
        let (n, levels) = if suite.full() { (20, 3) } else { (5, 2) };
        for p in suite.exponent_grid(n) {
            let area = ball_area(p, 0, opts.tolerances.quadrature)?;
            for m in 0..levels {
                let config = suite.config(p, m)?;
                let delta = config.critical_determinant;
                let ins = inscribed_for(&config.lattice);
                let gap = (ins.area - 3.0 * delta).abs();
                t.require(gap < 1e-9 * delta.max(1.0), || format!("p = {p}, m = {m}: inscribed area off 3Δ by {gap:e}"));
                let circ = circumscribed_for(p, &config.lattice)?;
                t.residual((circ.area - 4.0 * delta).abs());
                t.residual((circ.area / ins.area - 4.0 / 3.0).abs());
                let ball = area * dyadic(2 * m);
                t.require(ins.area < ball && ball < circ.area, || format!("p = {p}, m = {m}: sandwich fails"));
            }
        }
        Ok(())
    }));

    checks.push(run_check("scaling_laws", 1e-12, |t| {
        let exps: &[f64] = if suite.full() { &[1.0, 1.5, 2.0, 2.3, 3.0, 7.0] } else { &[1.5, 2.3, 3.0] };
        for &p in exps {
            let c = suite.constants(p)?;
            let base_config = suite.config(p, 0)?;
            let base_density = packing_report(&base_config, &opts.tolerances)?.density;
            for kind in [CriticalLatticeKind::Lambda0, CriticalLatticeKind::Lambda1] {
                let base = critical_lattice(p, kind, 0, &c)?.det();
                for m in 0..=10 {
                    let det = critical_lattice(p, kind, m, &c)?.det();
                    t.residual((det / (dyadic(2 * m) * base) - 1.0).abs());
                }
            }
            for m in 1..=if suite.full() { 10 } else { 3 } {
                let d = packing_report(&suite.config(p, m)?, &opts.tolerances)?.density;
                t.residual((d - base_density).abs());
            }
        }
        Ok(())
    }));

    checks.push(run_check("nonoverlap", 0.5, |t| {
        let exps: &[f64] = if suite.full() { &[1.0, 1.3, 1.5, 2.0, 2.3, 3.0, 6.0] } else { &[1.5, 2.0, 3.0] };
        for &p in exps {
            for m in 0..=if suite.full() { 2 } else { 1 } {
                let config = suite.config(p, m)?;
                let lattice = config.doubled()?.lattice;
                let ok = verify_packing_lattice(&lattice, &config.spec, 400, opts.tolerances.contact)?;
                t.require(ok, || format!("p = {p}, m = {m}: optimal packing overlaps"));
                let shrunk = verify_packing_lattice(&lattice.scaled(0.99)?, &config.spec, 400, opts.tolerances.contact)?;
                t.require(!shrunk, || format!("p = {p}, m = {m}: 1% shrink still a packing"));
            }
        }
        Ok(())
    }));

    checks.push(run_check("direct_system", 0.5, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let system = DirectSystem::new(SystemKind::Balls, 2.5)?;
        let triples = if suite.full() { 200 } else { 30 };
        for _ in 0..triples {
            let mut lv = [rng.gen_range(0..=16u32), rng.gen_range(0..=16u32), rng.gen_range(0..=16u32)];
            lv.sort_unstable();
            let points: Vec<Vec2> = (0..100)
                .map(|_| Vec2::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)))
                .collect();
            let ok = system.check_functor_laws(DyadicLevel(lv[0]), DyadicLevel(lv[1]), DyadicLevel(lv[2]), &points)?;
            t.require(ok, || format!("functor law fails for levels {lv:?}"));
        }
        let samples = if suite.full() { 1000 } else { 200 };
        for _ in 0..samples {
            let p = rng.gen_range(1.0..8.0);
            let z = Vec2::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
            let mem = limit_membership(p, z)?;
            let k = dyadic(mem.level);
            t.require(power_sum(p, z.scale(1.0 / k)) <= 1.0, || format!("{z:?} not in level {}", mem.level));
            if mem.level > 0 {
                t.require(power_sum(p, z.scale(2.0 / k)) > 1.0, || format!("level {} not minimal for {z:?}", mem.level));
            }
            let even = limit_membership_cofinal(p, z, 2)?;
            t.require(even.level >= mem.level && even.level - mem.level <= 1, || "cofinal level off".into());
        }
        Ok(())
    }));

    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let report = run(&VerifyOptions::new(VerifyLevel::Fast));
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.to_text().contains("davis_constant ≈ 2.5725"));
    }

    #[test]
    fn perturbed_tau_fails() {
        let mut opts = VerifyOptions::new(VerifyLevel::Fast);
        opts.tau_perturbation = 1e-3;
        let report = run(&opts);
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name == "contacts_admissibility"));
    }
}
