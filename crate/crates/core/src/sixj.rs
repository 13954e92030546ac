//! Exact 6j-symbols, their relation to eigenbasis overlaps, the large-label
//! asymptotic formula and the Bohr–Sommerfeld parity conditions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::graphs::{clebsch_gordan_ok, AdmissibleGraph, Coloring};
use crate::tetra::TetraEdges;

/// `s·√q` with `q ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtRational {
    pub s: Rational,
    pub q: Rational,
}

const SMALL_PRIMES_BOUND: u32 = 1000;

fn primes_up_to(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p as u32);
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
    }
    out
}

impl SqrtRational {
    /// Moves denominators and square factors of `q` into `s`: trial division
    /// by small primes, then a perfect-square test on what is left.
    pub fn new(s: Rational, q: Rational) -> Self {
        assert!(!q.is_negative(), "negative radicand");
        if s.is_zero() || q.is_zero() {
            return SqrtRational::zero();
        }
        let (n, d) = (q.numer().clone(), q.denom().clone());
        let mut s = s / Rational::from_integer(d.clone());
        let mut rest = n * d;
        let mut q = BigInt::one();
        for p in primes_up_to(SMALL_PRIMES_BOUND) {
            let p = BigInt::from(p);
            if &p * &p > rest {
                break;
            }
            let mut e = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                e += 1;
            }
            s *= Rational::from_integer(p.pow(e / 2));
            if e % 2 == 1 {
                q *= &p;
            }
        }
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= Rational::from_integer(r);
        } else {
            q *= rest;
        }
        SqrtRational { s, q: Rational::from_integer(q) }
    }

    pub fn zero() -> Self {
        SqrtRational { s: Rational::zero(), q: Rational::one() }
    }

    pub fn from_rational(r: Rational) -> Self {
        SqrtRational::new(r, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.s.is_zero() {
            0
        } else if self.s.is_positive() {
            1
        } else {
            -1
        }
    }

    /// `value² = s²q`.
    pub fn square(&self) -> Rational {
        &self.s * &self.s * &self.q
    }

    pub fn to_f64(&self) -> f64 {
        let sq = self.square().to_f64().unwrap_or(f64::NAN);
        self.signum() as f64 * sq.sqrt()
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_one() {
            write!(f, "{}", self.s)
        } else {
            write!(f, "{}*sqrt({})", self.s, self.q)
        }
    }
}

static FACTORIALS: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// Runs `f` with `n!` available for all `n ≤ max`.
fn with_factorials<T>(max: usize, f: impl FnOnce(&[BigInt]) -> T) -> T {
    {
        let table = FACTORIALS.read().expect("factorial cache poisoned");
        if table.len() > max {
            return f(&table);
        }
    }
    let mut table = FACTORIALS.write().expect("factorial cache poisoned");
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= max {
        let n = table.len();
        let next = &table[n - 1] * n;
        table.push(next);
    }
    f(&table)
}

pub fn factorial(n: usize) -> BigInt {
    with_factorials(n, |t| t[n].clone())
}

/// Exponent of `p` in `n!`.
fn legendre(n: u32, p: u32) -> i64 {
    let (mut e, mut pk) = (0i64, p as u64);
    while pk <= n as u64 {
        e += (n as u64 / pk) as i64;
        pk *= p as u64;
    }
    e
}

/// Labels `{m1 m2 m; m3 m4 m′}` (twice the spins) with triads
/// `(m1,m2,m)`, `(m3,m4,m)`, `(m1,m4,m′)`, `(m2,m′,m3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SixJLabels(pub [u32; 6]);

impl SixJLabels {
    pub fn new(m1: u32, m2: u32, m: u32, m3: u32, m4: u32, mp: u32) -> Self {
        SixJLabels([m1, m2, m, m3, m4, mp])
    }

    pub fn triads(&self) -> [[u32; 3]; 4] {
        let [m1, m2, m, m3, m4, mp] = self.0;
        [[m1, m2, m], [m3, m4, m], [m1, m4, mp], [m2, mp, m3]]
    }

    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(|&[a, b, c]| clebsch_gordan_ok(a, b, c))
    }
}

impl fmt::Display for SixJLabels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [m1, m2, m, m3, m4, mp] = self.0;
        write!(f, "{{{m1} {m2} {m}; {m3} {m4} {mp}}}")
    }
}

/// Exact 6j-symbol by the Racah single sum; zero for inadmissible labels.
pub fn racah_6j(lbl: SixJLabels) -> SqrtRational {
    if !lbl.is_admissible() {
        return SqrtRational::zero();
    }
    let [m1, m2, m, m3, m4, mp] = lbl.0;
    let triads = lbl.triads();
    // Triad sums and the three quadrangle sums, in spin units.
    let alpha: Vec<u32> = triads.iter().map(|t| t.iter().sum::<u32>() / 2).collect();
    let beta = [(m1 + m2 + m3 + m4) / 2, (m2 + m + m4 + mp) / 2, (m + m1 + mp + m3) / 2];
    let zmin = *alpha.iter().max().unwrap();
    let zmax = *beta.iter().min().unwrap();

    // √(Π Δ) through prime exponents of the factorials involved.
    let top = beta.iter().max().unwrap() + 1;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut radicand = BigInt::one();
    for p in primes_up_to(top) {
        let mut e = 0i64;
        for &[a, b, c] in &triads {
            let t = (a + b + c) / 2;
            e += legendre(t - a, p) + legendre(t - b, p) + legendre(t - c, p) - legendre(t + 1, p);
        }
        let (half, odd) = e.div_mod_floor(&2);
        let pb = BigInt::from(p);
        if half > 0 {
            num *= pb.pow(half as u32);
        } else if half < 0 {
            den *= pb.pow((-half) as u32);
        }
        if odd == 1 {
            radicand *= pb;
        }
    }

    let sum = with_factorials(zmax as usize + 1, |fact| {
        let mut acc = Rational::zero();
        for z in zmin..=zmax {
            let mut d = BigInt::one();
            for &a in &alpha {
                d *= &fact[(z - a) as usize];
            }
            for &b in &beta {
                d *= &fact[(b - z) as usize];
            }
            let term = Rational::new(fact[z as usize + 1].clone(), d);
            if z % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    });
    if sum.is_zero() {
        return SqrtRational::zero();
    }
    SqrtRational { s: sum * Rational::new(num, den), q: Rational::from_integer(radicand) }
}

/// Boundary labels `kℓᵢ − 1`.
pub fn boundary_labels(k: u32, ell: &[u32]) -> Result<Vec<u32>> {
    if k == 0 || ell.contains(&0) {
        return Err(Error::InvalidArgument("k and ℓ must be positive".into()));
    }
    Ok(ell.iter().map(|&l| k * l - 1).collect())
}

/// Overlap predicted from the 6j-symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedOverlap {
    pub sixj: SqrtRational,
    /// `(m+1)(m′+1)·6j²`, the squared overlap magnitude.
    pub square: Rational,
    /// Sign including the `(−1)^{kΣℓ/2}` factor; convention dependent.
    pub sign: i8,
}

impl PredictedOverlap {
    pub fn magnitude(&self) -> f64 {
        self.square.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// `(−1)^{kΣℓ/2} √((m+1)(m′+1)) · {kℓ₁−1 kℓ₂−1 m; kℓ₃−1 kℓ₄−1 m′}`.
pub fn overlap_from_6j(k: u32, ell: [u32; 4], m: u32, mp: u32) -> Result<PredictedOverlap> {
    let b = boundary_labels(k, &ell)?;
    overlap_from_labels([b[0], b[1], b[2], b[3]], m, mp)
}

/// The same prediction in terms of the boundary labels `φ(i) = kℓᵢ − 1`.
pub fn overlap_from_labels(b: [u32; 4], m: u32, mp: u32) -> Result<PredictedOverlap> {
    let lbl = SixJLabels::new(b[0], b[1], m, b[2], b[3], mp);
    if !lbl.is_admissible() {
        return Err(Error::Inadmissible(lbl.0));
    }
    let sixj = racah_6j(lbl);
    let weight = Rational::from_integer(BigInt::from((m as u64 + 1) * (mp as u64 + 1)));
    let flip = (b.iter().map(|&x| x + 1).sum::<u32>() / 2) % 2 == 1;
    let sign = if flip { -sixj.signum() } else { sixj.signum() };
    Ok(PredictedOverlap { square: weight * sixj.square(), sixj, sign })
}

/// Leading-order asymptotics at scale `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobertsValue {
    /// Overlap scale: `√(2/(3π)) k^{−1/2} (EE′)^{1/4} V^{−1/2} cos(kθ/2 + π/4)`.
    pub overlap: f64,
    /// 6j scale: `√(2/(3π)) k^{−3/2} V^{−1/2} cos(kθ/2 + π/4)`.
    pub sixj: f64,
    /// `√(2/(3π)) k^{−3/2} V^{−1/2}`.
    pub envelope: f64,
    pub cosine: f64,
    pub volume: f64,
    pub theta: f64,
}

pub fn roberts_asymptotic(k: u32, e: f64, ep: f64, ell: [f64; 4]) -> Result<RobertsValue> {
    let t = TetraEdges::new(e.sqrt(), ep.sqrt(), ell)?;
    let theta = t.theta_phase()?;
    let volume = t.volume()?;
    if volume <= 0.0 {
        return Err(Error::DegenerateTetrahedron);
    }
    let kf = k as f64;
    let c = (2.0 / (3.0 * PI)).sqrt();
    let cosine = (kf * theta / 2.0 + PI / 4.0).cos();
    let envelope = c * kf.powf(-1.5) / volume.sqrt();
    Ok(RobertsValue {
        overlap: c * kf.powf(-0.5) * (e * ep).powf(0.25) / volume.sqrt() * cosine,
        sixj: envelope * cosine,
        envelope,
        cosine,
        volume,
        theta,
    })
}

/// Integrality of `(k/2)(√E_a + Σ_{I(a)} ℓᵢ) + ε_a/2` at every internal edge,
/// with `√E_a = (φ(a)+1)/k` and `ε_a = #I(a) + 1 mod 2`.
pub fn bs_check(g: &AdmissibleGraph, ell: &[u32], k: u32, phi: &Coloring) -> Result<bool> {
    let labels = boundary_labels(k, ell)?;
    if labels.len() != g.n_half() || phi.half != labels {
        return Err(Error::BoundaryMismatch(format!(
            "coloring boundary {:?} differs from kℓ − 1 = {:?}",
            phi.half, labels
        )));
    }
    if phi.internal.len() != g.internal_edges().len() {
        return Err(Error::BoundaryMismatch("wrong number of internal colors".into()));
    }
    Ok((0..g.internal_edges().len()).all(|a| {
        let members = g.i_set(a);
        let eps = (members.len() as u64 + 1) % 2;
        let twice = phi.internal[a] as u64 + 1 + k as u64 * members.iter().map(|&i| ell[i - 1] as u64).sum::<u64>() + eps;
        twice.is_multiple_of(2)
    }))
}

/// `E = ((m+1)/k)²` and `Ẽ = m(m+2)/k²`, checked to satisfy `Ẽ = E − 1/k²`.
pub fn eigenvalue_shift(k: u32, m: u32) -> Result<(Rational, Rational)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let k2 = Rational::from_integer(BigInt::from(k as u64 * k as u64));
    let e = Rational::from_integer(BigInt::from((m as u64 + 1).pow(2))) / &k2;
    let et = Rational::from_integer(BigInt::from(m as u64 * (m as u64 + 2))) / &k2;
    if et != &e - Rational::one() / &k2 {
        return Err(Error::Invariant(format!("eigenvalue shift fails at k={k}, m={m}")));
    }
    Ok((e, et))
}

/// The `m` of the given parity minimizing `|(m+1)/k − target|`, ties to the
/// smaller `m`.
pub fn nearest_admissible_label(k: u32, target: f64, parity: u32) -> u32 {
    let ideal = k as f64 * target - 1.0;
    let base = ideal.floor().max(0.0) as i64;
    let mut best: Option<(f64, u32)> = None;
    for m in (base - 2).max(0)..=base + 2 {
        if m as u32 % 2 != parity % 2 {
            continue;
        }
        let dist = ((m + 1) as f64 - k as f64 * target).abs();
        if best.is_none_or(|(d, _)| dist < d) {
            best = Some((dist, m as u32));
        }
    }
    best.expect("a label of each parity lies in any window of five").1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: u32,
    pub m: u32,
    pub m_prime: u32,
    #[serde(rename = "sqrtE")]
    pub sqrt_e: f64,
    #[serde(rename = "sqrtEp")]
    pub sqrt_ep: f64,
    pub exact_6j: f64,
    pub asymptotic_6j: f64,
    pub abs_err: f64,
    pub envelope: f64,
}

impl SweepRow {
    pub fn cosine(&self) -> f64 {
        self.asymptotic_6j / self.envelope
    }
}

pub const SWEEP_HEADER: &str = "k,m,m_prime,sqrtE,sqrtEp,exact_6j,asymptotic_6j,abs_err,envelope";

/// One sample: labels nearest the targets with the parity forced by the
/// boundary, exact and asymptotic 6j.
pub fn sweep_row(k: u32, ell: [u32; 4], target_sqrt_e: f64, target_sqrt_ep: f64) -> Result<SweepRow> {
    let b = boundary_labels(k, &ell)?;
    let m = nearest_admissible_label(k, target_sqrt_e, (b[0] + b[1]) % 2);
    let mp = nearest_admissible_label(k, target_sqrt_ep, (b[1] + b[2]) % 2);
    let lbl = SixJLabels::new(b[0], b[1], m, b[2], b[3], mp);
    if !lbl.is_admissible() {
        return Err(Error::Inadmissible(lbl.0));
    }
    let (sqrt_e, sqrt_ep) = ((m + 1) as f64 / k as f64, (mp + 1) as f64 / k as f64);
    let r = roberts_asymptotic(k, sqrt_e * sqrt_e, sqrt_ep * sqrt_ep, ell.map(|l| l as f64))?;
    let exact = racah_6j(lbl).to_f64();
    Ok(SweepRow {
        k,
        m,
        m_prime: mp,
        sqrt_e,
        sqrt_ep,
        exact_6j: exact,
        asymptotic_6j: r.sixj,
        abs_err: (exact - r.sixj).abs(),
        envelope: r.envelope,
    })
}

/// Rows for every `k` in `ks`, in the order given.
pub fn sweep(ks: &[u32], ell: [u32; 4], target_sqrt_e: f64, target_sqrt_ep: f64) -> Result<Vec<SweepRow>> {
    TetraEdges::new(target_sqrt_e, target_sqrt_ep, ell.map(|l| l as f64))?.theta_phase()?;
    ks.par_iter().map(|&k| sweep_row(k, ell, target_sqrt_e, target_sqrt_ep)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub fitted: usize,
    /// Least-squares slope of `ln|err|` against `ln k`; `None` with fewer
    /// than two usable rows.
    pub slope: Option<f64>,
    /// `max / median` of `k^{5/2}|err|`.
    pub uniformity: Option<f64>,
}

pub const COSINE_CUTOFF: f64 = 0.05;

pub fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.cosine().abs() >= COSINE_CUTOFF && r.abs_err > 0.0)
        .map(|r| ((r.k as f64).ln(), r.abs_err.ln()))
        .collect();
    let slope = (pts.len() >= 2)
        .then(|| {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            (sxx > 0.0).then(|| sxy / sxx)
        })
        .flatten();
    let mut scaled: Vec<f64> = rows.iter().map(|r| (r.k as f64).powf(2.5) * r.abs_err).collect();
    scaled.sort_by(f64::total_cmp);
    let uniformity = (!scaled.is_empty()).then(|| {
        let n = scaled.len();
        let median = if n % 2 == 1 { scaled[n / 2] } else { 0.5 * (scaled[n / 2 - 1] + scaled[n / 2]) };
        scaled[n - 1] / median
    });
    SweepSummary { rows: rows.len(), fitted: pts.len(), slope, uniformity }
}
