//! Grand-canonical ideal gases on the torus and the filling of a
//! degenerate Fermi sea.
//!
//! The sums over `(n, m)` use the bare dispersion
//! `ε_{nm} = n² + c m²` with `c = a/(a²-1)^{3/2}` (constant shifts absorbed
//! into `μ`); the Fermi-sea filling uses the diagonalized Hamiltonian,
//! whose levels keep the `-1/4` constants. `β` is in `1/E₀`, `μ` in `E₀`.

use std::collections::BTreeMap;

use crate::error::{domain, Error, Result};
use crate::geometry::check_aspect_ratio;
use crate::operators::{azimuthal_stiffness, epsilon_unchecked};
use crate::quadrature::{adaptive, GaussLegendre};
use crate::spectral::Sector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

/// Bounds `|n| <= n`, `|m| <= m` on the mode sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoffs {
    pub n: u32,
    pub m: u32,
}

/// Occupations beyond `ε - μ = TAIL_EXPONENT / β` are below `e^-64`.
const TAIL_EXPONENT: f64 = 64.0;

impl Cutoffs {
    /// Smallest cutoffs enclosing every mode with `β(ε - μ) < 64`.
    pub fn for_state(beta: f64, mu: f64, a: f64) -> Result<Self> {
        check_aspect_ratio(a)?;
        check_beta(beta)?;
        let reach = mu.max(0.0) + TAIL_EXPONENT / beta;
        let c = azimuthal_stiffness(a);
        let to_u32 = |x: f64| {
            if x.is_finite() && x < u32::MAX as f64 {
                Ok((x.ceil() as u32).max(1))
            } else {
                Err(domain(format!("temperature too high for a finite mode sum (beta = {beta})")))
            }
        };
        Ok(Self { n: to_u32(reach.sqrt())?, m: to_u32((reach / c).sqrt())? })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("beta must be positive and finite, got {beta}")))
    }
}

fn check_mu(stats: Statistics, mu: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(domain(format!("mu must be finite, got {mu}")));
    }
    if stats == Statistics::Bose && mu >= 0.0 {
        return Err(domain(format!(
            "Bose gas needs mu below the lowest mode energy 0, got mu = {mu}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub stats: Statistics,
    pub beta: f64,
    pub mu: f64,
    pub cutoffs: Cutoffs,
}

impl ThermoState {
    pub fn new(stats: Statistics, beta: f64, mu: f64, cutoffs: Cutoffs) -> Result<Self> {
        check_beta(beta)?;
        check_mu(stats, mu)?;
        if cutoffs.n == 0 || cutoffs.m == 0 {
            return Err(domain("cutoffs must be positive"));
        }
        Ok(Self { stats, beta, mu, cutoffs })
    }

    /// Same as [`ThermoState::new`] with [`Cutoffs::for_state`].
    pub fn with_default_cutoffs(stats: Statistics, beta: f64, mu: f64, a: f64) -> Result<Self> {
        check_mu(stats, mu)?;
        Self::new(stats, beta, mu, Cutoffs::for_state(beta, mu, a)?)
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.stats, self.beta, self.mu, self.cutoffs).map(|_| ())
    }
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `±ln(1 ± e^{-x})` with `x = β(ε - μ)`, overflow-safe.
fn log_term(stats: Statistics, x: f64) -> f64 {
    match stats {
        Statistics::Fermi => (-x).max(0.0) + (-x.abs()).exp().ln_1p(),
        Statistics::Bose if x > std::f64::consts::LN_2 => -(-(-x).exp()).ln_1p(),
        Statistics::Bose => -(-(-x).exp_m1()).ln(),
    }
}

/// Occupation `1/(e^x ± 1)`.
fn occupation(stats: Statistics, x: f64) -> f64 {
    match stats {
        Statistics::Fermi => {
            if x >= 0.0 {
                let t = (-x).exp();
                t / (1.0 + t)
            } else {
                1.0 / (1.0 + x.exp())
            }
        }
        Statistics::Bose => 1.0 / x.exp_m1(),
    }
}

/// Sum of `f(β(ε_{nm} − μ))` over the box, plus over the first shell
/// outside it.
fn mode_sum(state: &ThermoState, a: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let c = azimuthal_stiffness(a);
    let (nc, mc) = (state.cutoffs.n as i64, state.cutoffs.m as i64);
    let x = |n: i64, m: i64| state.beta * (epsilon_unchecked(n, m, c) - state.mu);
    let mut body = Neumaier::default();
    for n in -nc..=nc {
        for m in -mc..=mc {
            body.add(f(x(n, m)));
        }
    }
    let mut shell = Neumaier::default();
    for m in -(mc + 1)..=(mc + 1) {
        shell.add(f(x(nc + 1, m)));
        shell.add(f(x(-(nc + 1), m)));
    }
    for n in -nc..=nc {
        shell.add(f(x(n, mc + 1)));
        shell.add(f(x(n, -(mc + 1))));
    }
    (body.value(), shell.value())
}

/// A mode sum with the size of the first omitted shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSum {
    pub value: f64,
    /// Contribution of the shell just outside the cutoffs.
    pub tail: f64,
    /// `tail < 1e-10 |value|`.
    pub converged: bool,
}

impl ModeSum {
    fn new(value: f64, tail: f64) -> Self {
        Self { value, tail, converged: tail.abs() <= 1e-10 * value.abs() }
    }
}

/// `ln Z = ±Σ ln(1 ± e^{-β(ε_{nm} - μ)})`, upper sign Fermi.
pub fn grand_potential_log(state: &ThermoState, a: f64) -> Result<ModeSum> {
    check_aspect_ratio(a)?;
    state.validate()?;
    let (v, t) = mode_sum(state, a, |x| log_term(state.stats, x));
    Ok(ModeSum::new(v, t))
}

/// `⟨N⟩ = Σ 1/(e^{β(ε_{nm} - μ)} ± 1)`.
pub fn mean_particle_number(state: &ThermoState, a: f64) -> Result<ModeSum> {
    check_aspect_ratio(a)?;
    state.validate()?;
    let (v, t) = mode_sum(state, a, |x| occupation(state.stats, x));
    Ok(ModeSum::new(v, t))
}

/// Tolerance on `|⟨N⟩(μ) − target|`.
pub const PARTICLE_NUMBER_TOL: f64 = 1e-8;

/// Chemical potential with `⟨N⟩(μ) = target` by bisection.
///
/// With `cutoffs = None` the box grows with `μ` as in
/// [`Cutoffs::for_state`]; the particle number stays monotone in `μ`.
pub fn solve_chemical_potential(
    stats: Statistics,
    beta: f64,
    target: f64,
    a: f64,
    cutoffs: Option<Cutoffs>,
) -> Result<f64> {
    check_aspect_ratio(a)?;
    check_beta(beta)?;
    if !(target.is_finite() && target > 0.0) {
        return Err(domain(format!("target particle number must be positive, got {target}")));
    }
    let count = |mu: f64| -> Result<f64> {
        let cut = match cutoffs {
            Some(c) => c,
            None => Cutoffs::for_state(beta, mu, a)?,
        };
        Ok(mean_particle_number(&ThermoState::new(stats, beta, mu, cut)?, a)?.value)
    };

    let mut hi = match stats {
        Statistics::Bose => -1e-12 / beta,
        Statistics::Fermi => 1.0,
    };
    match (stats, cutoffs) {
        (Statistics::Bose, _) => {
            let capacity = count(hi)?;
            if capacity <= target {
                return Err(domain(format!(
                    "Bose gas saturates at {capacity} particles below mu = 0, target {target}"
                )));
            }
        }
        (Statistics::Fermi, Some(c)) => {
            let states = f64::from(2 * c.n + 1) * f64::from(2 * c.m + 1);
            if target >= states {
                return Err(domain(format!("only {states} states within the cutoffs, target {target}")));
            }
        }
        (Statistics::Fermi, None) => {}
    }
    while count(hi)? < target {
        hi = 2.0 * hi + 1.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::RootNotFound(format!("no upper bracket for target {target}")));
        }
    }
    let mut lo = hi.min(0.0) - 1.0;
    while count(lo)? > target {
        lo = 2.0 * lo - 1.0;
        if lo < -1e300 {
            return Err(Error::RootNotFound(format!("no lower bracket for target {target}")));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let n = count(mid)?;
        if (n - target).abs() < PARTICLE_NUMBER_TOL {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if n < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootNotFound(format!(
        "bisection stalled at mu in [{lo}, {hi}] without reaching |N - {target}| < {PARTICLE_NUMBER_TOL}"
    )))
}

/// Continuum (constant density of states) approximation
/// `ln Z ≈ (π/√c) ∫₀^∞ ±ln(1 ± e^{-β(ε-μ)}) dε`.
pub fn continuum_log_z(stats: Statistics, beta: f64, mu: f64, a: f64) -> Result<f64> {
    check_aspect_ratio(a)?;
    check_beta(beta)?;
    check_mu(stats, mu)?;
    let density = std::f64::consts::PI / azimuthal_stiffness(a).sqrt();
    let rule = GaussLegendre::new(10);
    let f = |e: f64| log_term(stats, beta * (e - mu));
    let end = mu.max(0.0) + 50.0 / beta;
    let mut total = 0.0;
    let mut lo = 0.0;
    if mu > 0.0 {
        total += adaptive(&rule, f, 0.0, mu, 1e-13)?.value;
        lo = mu;
    }
    total += adaptive(&rule, f, lo, end, 1e-13)?.value;
    // beyond `end` the integrand is e^{-β(ε-μ)} to double precision
    total += (-beta * (end - mu)).exp() / beta;
    Ok(density * total)
}

/// A single-particle level of the filled spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilledLevel {
    pub m: i64,
    pub h: usize,
    /// In `E₀`.
    pub energy: f64,
    /// In `T₀`.
    pub t3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermiFillReport {
    pub particles: usize,
    pub total_energy: f64,
    pub total_t3: f64,
    /// `(m, h)` of the occupied levels in filling order.
    pub occupied: Vec<(i64, usize)>,
}

/// Single-particle levels of all sectors `|m| <= m_cut`, ordered for
/// filling: by energy, then lower `|m|`, then lower `m`, then lower `h`.
///
/// Energies of `±m` sectors are bitwise equal (the Hamiltonian depends on
/// `m²`), and the members of a degenerate pair share one energy, so these
/// ties are real and the rule decides them.
#[derive(Debug, Clone)]
pub struct FermiSea {
    levels: Vec<FilledLevel>,
}

impl FermiSea {
    pub fn new(a: f64, m_cut: u32, truncation: usize) -> Result<Self> {
        check_aspect_ratio(a)?;
        let mut sectors = BTreeMap::new();
        for m in 0..=i64::from(m_cut) {
            sectors.insert(m, Sector::new(a, m, truncation)?);
        }
        let mut levels = Vec::new();
        for m in -i64::from(m_cut)..=i64::from(m_cut) {
            let s = &sectors[&m.abs()];
            for (h, (&energy, &t3)) in s.energies().iter().zip(s.t3_expectations()).enumerate() {
                levels.push(FilledLevel { m, h, energy, t3 });
            }
        }
        levels.sort_by(|x, y| {
            x.energy
                .total_cmp(&y.energy)
                .then(x.m.abs().cmp(&y.m.abs()))
                .then(x.m.cmp(&y.m))
                .then(x.h.cmp(&y.h))
        });
        Ok(Self { levels })
    }

    /// All levels in filling order.
    pub fn levels(&self) -> &[FilledLevel] {
        &self.levels
    }

    pub fn fill(&self, particles: usize) -> Result<FermiFillReport> {
        if particles > self.levels.len() {
            return Err(domain(format!(
                "cannot place {particles} fermions in {} levels",
                self.levels.len()
            )));
        }
        let occupied = &self.levels[..particles];
        let mut energy = Neumaier::default();
        let mut t3 = Neumaier::default();
        for l in occupied {
            energy.add(l.energy);
            t3.add(l.t3);
        }
        Ok(FermiFillReport {
            particles,
            total_energy: energy.value(),
            total_t3: t3.value(),
            occupied: occupied.iter().map(|l| (l.m, l.h)).collect(),
        })
    }
}

/// Occupies the `particles` lowest levels of the sectors `|m| <= m_cut`.
pub fn fermi_ground_fill(particles: usize, a: f64, m_cut: u32, truncation: usize) -> Result<FermiFillReport> {
    FermiSea::new(a, m_cut, truncation)?.fill(particles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fermi(beta: f64, mu: f64, a: f64) -> ThermoState {
        ThermoState::with_default_cutoffs(Statistics::Fermi, beta, mu, a).unwrap()
    }

    #[test]
    fn cold_fermi_gas_is_empty_below_the_band() {
        let s = fermi(50.0, -1.0, 2.0);
        assert!(grand_potential_log(&s, 2.0).unwrap().value < 1e-20);
        assert!(mean_particle_number(&s, 2.0).unwrap().value < 1e-20);
    }

    #[test]
    fn bose_requires_negative_mu() {
        for mu in [0.0, 0.3] {
            assert!(matches!(
                ThermoState::with_default_cutoffs(Statistics::Bose, 1.0, mu, 2.0),
                Err(Error::Domain(_))
            ));
            assert!(continuum_log_z(Statistics::Bose, 1.0, mu, 2.0).is_err());
        }
        assert!(ThermoState::with_default_cutoffs(Statistics::Fermi, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn summation_order_does_not_matter() {
        let s = ThermoState::new(Statistics::Fermi, 1.0, 0.0, Cutoffs { n: 200, m: 200 }).unwrap();
        let forward = grand_potential_log(&s, 2.0).unwrap().value;
        let c = azimuthal_stiffness(2.0);
        let mut reversed = Neumaier::default();
        for n in (-200..=200).rev() {
            for m in (-200..=200).rev() {
                reversed.add(log_term(Statistics::Fermi, epsilon_unchecked(n, m, c)));
            }
        }
        assert!((forward / reversed.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn continuum_limit_at_high_temperature() {
        // -Li2(-e^{0.05}) / 0.01 · π/√c, evaluated independently
        let expected = 434.349_045_950_804_2;
        let cont = continuum_log_z(Statistics::Fermi, 0.01, 5.0, 2.0).unwrap();
        assert!((cont / expected - 1.0).abs() < 1e-10);
        let disc = grand_potential_log(&fermi(0.01, 5.0, 2.0), 2.0).unwrap();
        assert!(disc.converged);
        assert!((disc.value / cont - 1.0).abs() < 0.01);
    }

    #[test]
    fn classical_limit() {
        let beta = 0.5;
        let mu = -10.0 / beta;
        let f = continuum_log_z(Statistics::Fermi, beta, mu, 2.0).unwrap();
        let b = continuum_log_z(Statistics::Bose, beta, mu, 2.0).unwrap();
        assert!((f / b - 1.0).abs() < 1e-3);
        let nf = mean_particle_number(&fermi(beta, mu, 2.0), 2.0).unwrap().value;
        let nb = mean_particle_number(
            &ThermoState::with_default_cutoffs(Statistics::Bose, beta, mu, 2.0).unwrap(),
            2.0,
        )
        .unwrap()
        .value;
        assert!((nf / nb - 1.0).abs() < 1e-3);
    }

    #[test]
    fn particle_number_is_the_mu_derivative() {
        for (stats, mu) in [(Statistics::Fermi, 3.0), (Statistics::Bose, -0.4)] {
            let beta = 0.7;
            let cut = Cutoffs::for_state(beta, mu + 0.01, 2.0).unwrap();
            let at = |mu: f64| {
                grand_potential_log(&ThermoState::new(stats, beta, mu, cut).unwrap(), 2.0).unwrap().value
            };
            let h = 1e-6;
            let fd = (at(mu + h) - at(mu - h)) / (2.0 * h * beta);
            let n = mean_particle_number(&ThermoState::new(stats, beta, mu, cut).unwrap(), 2.0).unwrap().value;
            assert!((fd / n - 1.0).abs() < 1e-6, "{stats:?}: {fd} vs {n}");
        }
    }

    #[test]
    fn chemical_potential_round_trip() {
        let mu = solve_chemical_potential(Statistics::Fermi, 1e3, 1.0, 2.0, None).unwrap();
        let n = mean_particle_number(&fermi(1e3, mu, 2.0), 2.0).unwrap().value;
        assert!((n - 1.0).abs() < 1e-8);
        assert!(mu > 0.0 && mu < azimuthal_stiffness(2.0));

        let mut prev = f64::NEG_INFINITY;
        for target in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let mu = solve_chemical_potential(Statistics::Fermi, 2.0, target, 2.0, None).unwrap();
            assert!(mu >= prev);
            prev = mu;
        }
        let mu = solve_chemical_potential(Statistics::Bose, 1.0, 0.5, 2.0, None).unwrap();
        assert!(mu < 0.0);
    }

    #[test]
    fn unreachable_targets() {
        let cut = Cutoffs { n: 1, m: 1 };
        assert!(matches!(
            solve_chemical_potential(Statistics::Fermi, 1.0, 9.0, 2.0, Some(cut)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_chemical_potential(Statistics::Bose, 1.0, 1e15, 2.0, Some(cut)),
            Err(Error::Domain(_))
        ));
        assert!(solve_chemical_potential(Statistics::Fermi, 1.0, 0.0, 2.0, None).is_err());
    }

    #[test]
    fn fermi_sea_basics() {
        let sea = FermiSea::new(2.0, 2, 40).unwrap();
        let one = sea.fill(1).unwrap();
        assert_eq!(one.occupied, vec![(0, 0)]);
        assert_eq!(one.total_t3, 0.0);
        // levels keep their -1/4 shifts, so the total only grows once the
        // negative levels are filled
        let negative = sea.levels().iter().filter(|l| l.energy < 0.0).count();
        assert!(negative > 0);
        let mut prev = f64::NEG_INFINITY;
        let mut last_increment = f64::NEG_INFINITY;
        for k in 0..60 {
            let r = sea.fill(k).unwrap();
            assert_eq!(r.occupied.len(), k);
            if k > negative {
                assert!(r.total_energy >= prev);
            }
            if k > 0 {
                let inc = r.total_energy - prev;
                assert!(inc >= last_increment - 1e-9);
                last_increment = inc;
            }
            prev = r.total_energy;
        }
        assert!(sea.fill(sea.levels().len() + 1).is_err());
        // ±m ties resolve to the negative m first
        let l = sea.levels();
        let i = l.iter().position(|x| x.m != 0).unwrap();
        assert_eq!(l[i].m, -1);
        assert_eq!(l[i].energy.to_bits(), l.iter().find(|x| x.m == 1 && x.h == l[i].h).unwrap().energy.to_bits());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn particle_number_increases_with_mu(mu in -5.0f64..5.0, step in 0.01f64..1.0, beta in 0.2f64..3.0) {
            let cut = Cutoffs::for_state(beta, mu + step, 2.0).unwrap();
            let n0 = mean_particle_number(&ThermoState::new(Statistics::Fermi, beta, mu, cut).unwrap(), 2.0).unwrap().value;
            let n1 = mean_particle_number(&ThermoState::new(Statistics::Fermi, beta, mu + step, cut).unwrap(), 2.0).unwrap().value;
            prop_assert!(n1 > n0);
            let bmu = -step - 0.01 - mu.abs();
            let b0 = mean_particle_number(&ThermoState::new(Statistics::Bose, beta, bmu, cut).unwrap(), 2.0).unwrap().value;
            let b1 = mean_particle_number(&ThermoState::new(Statistics::Bose, beta, bmu + step * 0.5, cut).unwrap(), 2.0).unwrap().value;
            prop_assert!(b1 > b0);
        }

        #[test]
        fn log_z_is_non_negative(mu in -20.0f64..20.0, beta in 0.05f64..5.0, a in 1.1f64..5.0) {
            let s = ThermoState::with_default_cutoffs(Statistics::Fermi, beta, mu, a).unwrap();
            prop_assert!(grand_potential_log(&s, a).unwrap().value >= 0.0);
            let s = ThermoState::with_default_cutoffs(Statistics::Bose, beta, -mu.abs() - 1e-3, a).unwrap();
            prop_assert!(grand_potential_log(&s, a).unwrap().value >= 0.0);
        }
    }
}
