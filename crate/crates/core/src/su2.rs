//! Exact SU(2) representation algebra on tensor products of irreducibles.
//!
//! `V_m` has the integer weight basis `v_0..v_m` with
//!
//! ```text
//! H v_k = (m - 2k) v_k,   E v_k = k(m + 1 - k) v_{k-1},   F v_k = v_{k+1}
//! ```
//!
//! and the invariant metric `<v_k, v_k> = k! m! / (m - k)!`, for which `E` is
//! the adjoint of `F`. All operator matrices are therefore integral; square
//! roots only appear when eigenvectors are normalized, and those are carried
//! as squared norms.
//!
//! The Casimir `C = H² + 2H + 4FE` acts on `V_m` as `m(m + 2)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{nullspace, rat, ExactMatrix, Kernel, Rational, SparseRow};
use crate::graphs::{enumerate_colorings, AdmissibleGraph, Coloring};

/// The irreducible representation `V_m` in its weight basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Irrep {
    pub m: u32,
}

impl Irrep {
    pub fn new(m: u32) -> Self {
        Irrep { m }
    }

    pub fn dim(&self) -> usize {
        self.m as usize + 1
    }

    pub fn h(&self) -> ExactMatrix {
        let m = self.m as i64;
        ExactMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                rat(m - 2 * i as i64)
            } else {
                rat(0)
            }
        })
    }

    pub fn e(&self) -> ExactMatrix {
        let m = self.m as i64;
        // column k holds E v_k = k(m+1-k) v_{k-1}
        ExactMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if j >= 1 && i == j - 1 {
                let k = j as i64;
                rat(k * (m + 1 - k))
            } else {
                rat(0)
            }
        })
    }

    pub fn f(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.dim(), self.dim(), |i, j| rat((i == j + 1) as i64))
    }

    pub fn casimir(&self) -> ExactMatrix {
        let h = self.h();
        let fe = &self.f() * &self.e();
        let two_h = h.scale(&rat(2));
        &(&(&h * &h) + &two_h) + &fe.scale(&rat(4))
    }

    /// Diagonal Gram entries `k! m!/(m-k)!`.
    pub fn metric(&self) -> Vec<BigInt> {
        (0..=self.m).map(|k| weight_metric(self.m, k)).collect()
    }
}

fn weight_metric(m: u32, k: u32) -> BigInt {
    let mut g = BigInt::one();
    for i in 1..=k {
        g *= BigInt::from(i) * BigInt::from(m + 1 - i);
    }
    g
}

/// Weight-basis state of a tensor product: `k_i` per factor.
type State = Vec<u16>;

fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty index set".into()));
    }
    if let Some(&i) = subset.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..{n}")));
    }
    Ok(())
}

/// Action of `Q_I` on one basis state, as `(state, coefficient)` pairs.
///
/// `Q_I = (Σ H_i)² + 2 Σ H_i + 4 Σ_i F_i E_i + 4 Σ_{i≠j} F_i E_j` over `i, j ∈ I`.
fn casimir_action(ell: &[u32], subset: &[usize], s: &[u16]) -> Vec<(State, i64)> {
    let mut out = Vec::new();
    let mut hsum = 0i64;
    let mut fe = 0i64;
    for &i in subset {
        let (m, k) = (ell[i - 1] as i64, s[i - 1] as i64);
        hsum += m - 2 * k;
        fe += k * (m + 1 - k);
    }
    out.push((s.to_vec(), hsum * hsum + 2 * hsum + 4 * fe));
    for &j in subset {
        let (mj, kj) = (ell[j - 1] as i64, s[j - 1] as i64);
        if kj == 0 {
            continue;
        }
        for &i in subset {
            if i == j || s[i - 1] as u32 >= ell[i - 1] {
                continue;
            }
            let mut t = s.to_vec();
            t[j - 1] -= 1;
            t[i - 1] += 1;
            out.push((t, 4 * kj * (mj + 1 - kj)));
        }
    }
    out
}

fn all_states(ell: &[u32]) -> Vec<State> {
    let mut out = vec![Vec::new()];
    for &m in ell {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..=m as u16).map(move |k| {
                    let mut t = s.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

/// States with `Σ k_i = total`, in descending lexicographic order. This
/// column order keeps fill-in low when eliminating the raising operator.
fn slice_states(ell: &[u32], total: i64) -> Vec<State> {
    fn rec(ell: &[u32], rest: i64, prefix: &mut State, out: &mut Vec<State>) {
        if ell.is_empty() {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let cap: i64 = ell[1..].iter().map(|&m| m as i64).sum();
        for k in (0..=(ell[0] as i64).min(rest)).rev() {
            if rest - k > cap {
                break;
            }
            prefix.push(k as u16);
            rec(&ell[1..], rest - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        rec(ell, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Matrix of `Q_I` on `V_{ℓ_1} ⊗ … ⊗ V_{ℓ_n}` in the product weight basis
/// (last factor fastest). `subset` holds 1-based factor indices.
pub fn casimir_on_tensor(ell: &[u32], subset: &[usize]) -> Result<ExactMatrix> {
    check_subset(ell.len(), subset)?;
    let states = all_states(ell);
    let index: HashMap<&State, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = ExactMatrix::zeros(states.len(), states.len());
    for (col, s) in states.iter().enumerate() {
        for (t, c) in casimir_action(ell, subset, s) {
            let row = index[&t];
            let v = m.get(row, col) + rat(c);
            m.set(row, col, v);
        }
    }
    Ok(m)
}

/// `dim Inv(V_{ℓ_1} ⊗ … ⊗ V_{ℓ_n})` by iterated Clebsch–Gordan
/// multiplicities; never touches a matrix.
pub fn dim_invariant(ell: &[u32]) -> u64 {
    let mut mult: BTreeMap<u32, u64> = BTreeMap::from([(0, 1)]);
    for &l in ell {
        let mut next = BTreeMap::new();
        for (&p, &c) in &mult {
            let mut m = p.abs_diff(l);
            while m <= p + l {
                *next.entry(m).or_insert(0) += c;
                m += 2;
            }
        }
        mult = next;
    }
    mult.get(&0).copied().unwrap_or(0)
}

/// Sparse operator on the weight-zero slice as `(row, col, coef)` triplets.
struct SliceOperator {
    entries: Vec<(usize, usize, i64)>,
}

impl SliceOperator {
    fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); v.len()];
        for &(r, c, k) in &self.entries {
            if !v[c].is_zero() {
                out[r] += &v[c] * k;
            }
        }
        out
    }
}

/// `Inv(V_{ℓ_1} ⊗ … ⊗ V_{ℓ_n})`, realized inside the weight-zero slice.
#[derive(Debug, Clone)]
pub struct InvariantSpace {
    ell: Vec<u32>,
    states: Vec<State>,
    index: HashMap<State, usize>,
    kernel: Kernel,
    metric: Vec<BigInt>,
    gram: Vec<Vec<BigInt>>,
}

impl InvariantSpace {
    /// Kernel of the total `E` on the weight-zero slice; `F` is then checked
    /// to annihilate every basis vector as well.
    pub fn new(ell: &[u32]) -> Result<Self> {
        let sum: i64 = ell.iter().map(|&m| m as i64).sum();
        let states = if sum % 2 == 0 { slice_states(ell, sum / 2) } else { Vec::new() };
        let index: HashMap<State, usize> =
            states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        // E: weight 0 -> weight 2 (one fewer lowering step).
        let upper = if sum % 2 == 0 { slice_states(ell, sum / 2 - 1) } else { Vec::new() };
        let upper_index: HashMap<&State, usize> =
            upper.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); upper.len()];
        for (col, s) in states.iter().enumerate() {
            for i in 0..ell.len() {
                let k = s[i] as i64;
                if k == 0 {
                    continue;
                }
                let mut t = s.clone();
                t[i] -= 1;
                let coef = k * (ell[i] as i64 + 1 - k);
                rows[upper_index[&t]].push((col, BigInt::from(coef)));
            }
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|(c, _)| *c);
                SparseRow(r)
            })
            .collect();
        let kernel = nullspace(rows, states.len());

        let metric: Vec<BigInt> = states
            .iter()
            .map(|s| {
                ell.iter()
                    .zip(s)
                    .fold(BigInt::one(), |acc, (&m, &k)| acc * weight_metric(m, k as u32))
            })
            .collect();
        let d = kernel.dim();
        let mut gram = vec![vec![BigInt::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                let g: BigInt = (0..states.len())
                    .filter(|&s| !kernel.basis[i][s].is_zero() && !kernel.basis[j][s].is_zero())
                    .map(|s| &metric[s] * &kernel.basis[i][s] * &kernel.basis[j][s])
                    .sum();
                gram[i][j] = g.clone();
                gram[j][i] = g;
            }
        }
        let space = InvariantSpace { ell: ell.to_vec(), states, index, kernel, metric, gram };
        space.check_lowering_kills_basis()?;
        Ok(space)
    }

    fn check_lowering_kills_basis(&self) -> Result<()> {
        let ell = &self.ell;
        for v in &self.kernel.basis {
            let mut image: HashMap<State, BigInt> = HashMap::new();
            for (si, s) in self.states.iter().enumerate() {
                if v[si].is_zero() {
                    continue;
                }
                for i in 0..ell.len() {
                    if (s[i] as u32) < ell[i] {
                        let mut t = s.clone();
                        t[i] += 1;
                        *image.entry(t).or_insert_with(BigInt::zero) += &v[si];
                    }
                }
            }
            if image.values().any(|x| !x.is_zero()) {
                return Err(Error::Invariant("F does not annihilate an E-kernel vector".into()));
            }
        }
        Ok(())
    }

    pub fn ell(&self) -> &[u32] {
        &self.ell
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ell.iter().map(|&m| m as usize + 1).product()
    }

    /// Weight-zero states `(k_1, …, k_n)` indexing basis coordinates.
    pub fn slice_states(&self) -> &[Vec<u16>] {
        &self.states
    }

    /// Integer basis vectors over the weight-zero slice.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.kernel.basis
    }

    /// Basis vectors as coordinates in the full product basis.
    pub fn ambient_basis(&self) -> Vec<Vec<Rational>> {
        let states = all_states(&self.ell);
        self.kernel
            .basis
            .iter()
            .map(|v| {
                states
                    .iter()
                    .map(|s| match self.index.get(s) {
                        Some(&i) => Rational::from_integer(v[i].clone()),
                        None => rat(0),
                    })
                    .collect()
            })
            .collect()
    }

    /// Product metric of the slice states.
    pub fn metric(&self) -> &[BigInt] {
        &self.metric
    }

    pub fn gram(&self) -> ExactMatrix {
        let d = self.dim();
        ExactMatrix::from_fn(d, d, |i, j| Rational::from_integer(self.gram[i][j].clone()))
    }

    /// `xᵀ G y` for coordinate vectors in this basis.
    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += xi * yj * Rational::from_integer(self.gram[i][j].clone());
                }
            }
        }
        acc
    }

    fn slice_casimir(&self, subset: &[usize]) -> SliceOperator {
        let mut entries = Vec::new();
        for (col, s) in self.states.iter().enumerate() {
            for (t, c) in casimir_action(&self.ell, subset, s) {
                entries.push((self.index[&t], col, c));
            }
        }
        SliceOperator { entries }
    }

    /// Matrix of `Q_I` restricted to the invariant subspace, in the stored
    /// basis. The restriction exists because `Q_I` commutes with the
    /// diagonal action; failure to solve is reported as an invariant breach.
    pub fn restrict_casimir(&self, subset: &[usize]) -> Result<ExactMatrix> {
        check_subset(self.ell.len(), subset)?;
        let op = self.slice_casimir(subset);
        let d = self.dim();
        let pivots: Vec<&BigInt> =
            self.kernel.basis.iter().zip(&self.kernel.free_cols).map(|(b, &f)| &b[f]).collect();
        let lcm = pivots.iter().fold(BigInt::one(), |acc, p| acc.lcm(p));
        let mut out = ExactMatrix::zeros(d, d);
        for j in 0..d {
            let w = op.apply(&self.kernel.basis[j]);
            // c_i = w[f_i] / b_i[f_i]; check Σ c_i b_i = w after scaling by lcm.
            let scaled: Vec<BigInt> = self
                .kernel
                .free_cols
                .iter()
                .zip(&pivots)
                .map(|(&f, p)| &w[f] * (&lcm / *p))
                .collect();
            let mut recon = vec![BigInt::zero(); w.len()];
            for (i, c) in scaled.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (r, b) in recon.iter_mut().zip(&self.kernel.basis[i]) {
                    if !b.is_zero() {
                        *r += c * b;
                    }
                }
            }
            if recon.iter().zip(&w).any(|(r, x)| r != &(x * &lcm)) {
                return Err(Error::Invariant(format!(
                    "Q_{subset:?} does not preserve the invariant subspace"
                )));
            }
            for (i, &f) in self.kernel.free_cols.iter().enumerate() {
                out.set(i, j, Rational::new(w[f].clone(), pivots[i].clone()));
            }
        }
        Ok(out)
    }
}

fn check_boundary(g: &AdmissibleGraph, space: &InvariantSpace) -> Result<()> {
    if g.n_half() != space.ell().len() {
        return Err(Error::BoundaryMismatch(format!(
            "graph has {} half-edges, boundary has {} entries",
            g.n_half(),
            space.ell().len()
        )));
    }
    Ok(())
}

/// `H_{a,ℓ}`: the restriction of `Q_{I(a)}` to the invariant subspace.
pub fn h_a_matrix(g: &AdmissibleGraph, space: &InvariantSpace, edge: &str) -> Result<ExactMatrix> {
    check_boundary(g, space)?;
    let e = g.edge_index(edge)?;
    space.restrict_casimir(&g.i_set(e))
}

/// A joint eigenvector, stored as an exact direction plus its squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct JointEigenvector {
    pub coloring: Coloring,
    /// Coordinates in the invariant basis; first non-zero entry positive.
    pub coords: Vec<Rational>,
    pub norm2: Rational,
}

impl JointEigenvector {
    /// Joint eigenvalues `φ(a)(φ(a) + 2)` in edge order.
    pub fn eigenvalues(&self) -> Vec<u64> {
        self.coloring.internal.iter().map(|&c| c as u64 * (c as u64 + 2)).collect()
    }
}

/// One simple joint eigenvector of `{H_a}` per admissible coloring.
///
/// Candidate eigenvalues come from the colorings; each joint eigenspace must
/// be one-dimensional and together they must exhaust the space.
pub fn joint_eigenbasis(g: &AdmissibleGraph, space: &InvariantSpace) -> Result<Vec<JointEigenvector>> {
    check_boundary(g, space)?;
    let d = space.dim();
    let h: Vec<ExactMatrix> = (0..g.internal_edges().len())
        .map(|e| space.restrict_casimir(&g.i_set(e)))
        .collect::<Result<_>>()?;
    let colorings = enumerate_colorings(g, space.ell());
    if colorings.len() != d {
        return Err(Error::Invariant(format!(
            "{} colorings but invariant space has dimension {d}",
            colorings.len()
        )));
    }
    let mut out = Vec::with_capacity(colorings.len());
    for phi in colorings {
        let mut rows = Vec::new();
        for (e, he) in h.iter().enumerate() {
            let c = phi.internal[e] as i64;
            let shifted = he.minus_scalar(&rat(c * (c + 2)));
            rows.extend((0..d).map(|i| SparseRow::from_rationals(shifted.row(i))));
        }
        let kernel = nullspace(rows, d);
        if kernel.dim() != 1 {
            return Err(Error::Invariant(format!(
                "joint eigenspace of {:?} has dimension {}",
                phi.internal,
                kernel.dim()
            )));
        }
        let mut v = kernel.basis.into_iter().next().unwrap();
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        let coords: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
        let norm2 = space.inner(&coords, &coords);
        out.push(JointEigenvector { coloring: phi, coords, norm2 });
    }
    Ok(out)
}

pub fn eigenbasis_json(g: &AdmissibleGraph, basis: &[JointEigenvector]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = basis
        .iter()
        .map(|v| {
            let coords: Vec<String> = v.coords.iter().map(|c| c.to_string()).collect();
            (v.coloring.key(g), json!({"coords": coords, "norm2": v.norm2.to_string()}))
        })
        .collect();
    serde_json::Value::Object(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapEntry {
    pub exact_sq: Rational,
    pub sign: i8,
}

impl OverlapEntry {
    pub fn value(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.sign as f64 * self.exact_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"exact_sq": self.exact_sq.to_string(), "float": self.value(), "sign": self.sign})
    }
}

/// `(Ψ_φ, Ψ'_ψ)` between two normalized joint eigenbases of the same space.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub rows: Vec<Coloring>,
    pub cols: Vec<Coloring>,
    pub entries: Vec<Vec<OverlapEntry>>,
}

impl OverlapMatrix {
    pub fn between(space: &InvariantSpace, a: &[JointEigenvector], b: &[JointEigenvector]) -> Self {
        let entries = a
            .iter()
            .map(|u| {
                b.iter()
                    .map(|w| {
                        let ip = space.inner(&u.coords, &w.coords);
                        let sign = if ip.is_zero() { 0 } else if ip.is_positive() { 1 } else { -1 };
                        OverlapEntry { exact_sq: &ip * &ip / (&u.norm2 * &w.norm2), sign }
                    })
                    .collect()
            })
            .collect();
        OverlapMatrix {
            rows: a.iter().map(|v| v.coloring.clone()).collect(),
            cols: b.iter().map(|v| v.coloring.clone()).collect(),
            entries,
        }
    }

    pub fn squares(&self) -> Vec<Vec<Rational>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.exact_sq.clone()).collect()).collect()
    }

    pub fn to_json(&self, g1: &AdmissibleGraph, g2: &AdmissibleGraph) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .zip(&self.entries)
            .map(|(r, es)| {
                let cells: serde_json::Map<String, serde_json::Value> =
                    self.cols.iter().zip(es).map(|(c, e)| (c.key(g2), e.to_json())).collect();
                json!({"row": r.key(g1), "overlaps": cells})
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Overlap matrix between the joint eigenbases of `g1` and `g2` on `ℓ`.
pub fn overlap_matrix(g1: &AdmissibleGraph, g2: &AdmissibleGraph, ell: &[u32]) -> Result<OverlapMatrix> {
    if g1.n_half() != g2.n_half() {
        return Err(Error::InvalidArgument("graphs have different numbers of half-edges".into()));
    }
    let space = InvariantSpace::new(ell)?;
    let a = joint_eigenbasis(g1, &space)?;
    let b = joint_eigenbasis(g2, &space)?;
    Ok(OverlapMatrix::between(&space, &a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_graph;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn generator_relations() {
        for m in 0..=25 {
            let r = Irrep::new(m);
            let (h, e, f) = (r.h(), r.e(), r.f());
            assert_eq!(&(&e * &f) - &(&f * &e), h, "[E,F]=H, m={m}");
            assert_eq!(&(&h * &e) - &(&e * &h), e.scale(&rat(2)), "[H,E]=2E, m={m}");
            assert_eq!(&(&h * &f) - &(&f * &h), f.scale(&rat(-2)), "[H,F]=-2F, m={m}");
            let g = r.metric();
            for k in 1..=m as usize {
                // <E v_k, v_{k-1}> = <v_k, F v_{k-1}>
                assert_eq!(&g[k - 1] * e.get(k - 1, k).numer().clone(), g[k].clone());
            }
            assert!(r.casimir().is_diagonal_constant(&rat(m as i64 * (m as i64 + 2))));
        }
    }

    #[test]
    fn casimir_examples() {
        let c = casimir_on_tensor(&[2], &[1]).unwrap();
        assert!(c.is_diagonal_constant(&rat(8)));
        let c = casimir_on_tensor(&[1, 1], &[1]).unwrap();
        assert!(c.is_diagonal_constant(&rat(3)));
        // Q on V1⊗V1: kernel of Q has dim 1, kernel of Q-8 has dim 3.
        let c = casimir_on_tensor(&[1, 1], &[1, 2]).unwrap();
        assert_eq!(c.kernel().dim(), 1);
        assert_eq!(c.minus_scalar(&rat(8)).kernel().dim(), 3);
        assert!(casimir_on_tensor(&[1, 1], &[]).is_err());
        assert!(casimir_on_tensor(&[1, 1], &[3]).is_err());
    }

    #[test]
    fn casimir_is_sum_of_generators() {
        // Q_I = H_I² + 2H_I + 4F_I E_I with H_I etc. built from Kronecker factors.
        let ell = [1u32, 2, 1];
        let subset = [1usize, 3];
        let n: usize = ell.iter().map(|&m| m as usize + 1).product();
        let embed = |op: &ExactMatrix, pos: usize| -> ExactMatrix {
            let mut out = ExactMatrix::identity(1);
            for (i, &m) in ell.iter().enumerate() {
                let f = if i == pos { op.clone() } else { ExactMatrix::identity(m as usize + 1) };
                let (r1, c1, r2, c2) = (out.rows(), out.cols(), f.rows(), f.cols());
                out = ExactMatrix::from_fn(r1 * r2, c1 * c2, |i, j| {
                    out.get(i / r2, j / c2) * f.get(i % r2, j % c2)
                });
            }
            out
        };
        let mut h = ExactMatrix::zeros(n, n);
        let mut e = ExactMatrix::zeros(n, n);
        let mut f = ExactMatrix::zeros(n, n);
        for &i in &subset {
            let r = Irrep::new(ell[i - 1]);
            h = &h + &embed(&r.h(), i - 1);
            e = &e + &embed(&r.e(), i - 1);
            f = &f + &embed(&r.f(), i - 1);
        }
        let expected = &(&(&h * &h) + &h.scale(&rat(2))) + &(&f * &e).scale(&rat(4));
        assert_eq!(casimir_on_tensor(&ell, &subset).unwrap(), expected);
    }

    #[test]
    fn invariant_dimensions() {
        assert_eq!(InvariantSpace::new(&[1, 1]).unwrap().dim(), 1);
        assert_eq!(InvariantSpace::new(&[1, 1, 1, 1]).unwrap().dim(), 2);
        assert_eq!(InvariantSpace::new(&[1, 1, 1]).unwrap().dim(), 0);
        assert_eq!(dim_invariant(&[2, 2, 2, 2]), 3);
        assert_eq!(dim_invariant(&[1, 1, 2]), 1);
        assert_eq!(dim_invariant(&[1, 1, 1, 1, 1, 1]), 5);
        assert_eq!(dim_invariant(&[1, 1, 1]), 0);
    }

    #[test]
    fn invariant_vectors_killed_in_ambient_space() {
        for ell in [[1u32, 1, 1, 1], [2, 1, 2, 1], [2, 2, 2, 2]] {
            let space = InvariantSpace::new(&ell).unwrap();
            let n = ell.len();
            let total = |pick: fn(&Irrep) -> ExactMatrix| {
                let mut acc: Option<ExactMatrix> = None;
                for pos in 0..n {
                    let mut out = ExactMatrix::identity(1);
                    for (i, &m) in ell.iter().enumerate() {
                        let r = Irrep::new(m);
                        let f = if i == pos { pick(&r) } else { ExactMatrix::identity(r.dim()) };
                        let (r2, c2) = (f.rows(), f.cols());
                        out = ExactMatrix::from_fn(out.rows() * r2, out.cols() * c2, |i, j| {
                            out.get(i / r2, j / c2) * f.get(i % r2, j % c2)
                        });
                    }
                    acc = Some(match acc {
                        None => out,
                        Some(a) => &a + &out,
                    });
                }
                acc.unwrap()
            };
            let (h, e, f) = (total(Irrep::h), total(Irrep::e), total(Irrep::f));
            for v in space.ambient_basis() {
                for op in [&h, &e, &f] {
                    assert!(op.mul_vec(&v).iter().all(Zero::is_zero));
                }
            }
        }
    }

    #[test]
    fn h_a_examples() {
        let g = AdmissibleGraph::builtin("g4").unwrap();
        let space = InvariantSpace::new(&[1, 1, 1, 1]).unwrap();
        let h = h_a_matrix(&g, &space, "e1").unwrap();
        assert_eq!(h.rows(), 2);
        assert_eq!(h.kernel().dim(), 1);
        assert_eq!(h.minus_scalar(&rat(8)).kernel().dim(), 1);
        // orientation independence
        let hr = h_a_matrix(&g.reversed("e1").unwrap(), &space, "e1").unwrap();
        assert_eq!(h, hr);

        let space = InvariantSpace::new(&[2, 2, 2, 2]).unwrap();
        let h = h_a_matrix(&g, &space, "e1").unwrap();
        for ev in [0, 8, 24] {
            assert_eq!(h.minus_scalar(&rat(ev)).kernel().dim(), 1);
        }
    }

    #[test]
    fn complement_casimirs_agree_on_invariants() {
        for ell in [vec![1u32, 2, 1, 2], vec![1, 1, 2, 1, 1], vec![2, 1, 1, 2, 1, 1]] {
            let space = InvariantSpace::new(&ell).unwrap();
            let n = ell.len();
            let subset: Vec<usize> = (1..=2).collect();
            let complement: Vec<usize> = (3..=n).collect();
            assert_eq!(
                space.restrict_casimir(&subset).unwrap(),
                space.restrict_casimir(&complement).unwrap()
            );
        }
    }

    #[test]
    fn h_matrices_commute() {
        let cases: [(&str, Vec<u32>); 4] = [
            ("cat5", vec![1, 1, 1, 1, 2]),
            ("cat5", vec![2, 2, 1, 2, 1]),
            ("cat6", vec![1, 1, 1, 1, 1, 1]),
            ("star6", vec![2, 1, 1, 2, 1, 1]),
        ];
        for (name, ell) in cases {
            let g = AdmissibleGraph::builtin(name).unwrap();
            let space = InvariantSpace::new(&ell).unwrap();
            let hs: Vec<ExactMatrix> = g
                .internal_edges()
                .iter()
                .map(|e| h_a_matrix(&g, &space, &e.id).unwrap())
                .collect();
            for a in &hs {
                for b in &hs {
                    assert_eq!(a * b, b * a);
                }
            }
        }
    }

    #[test]
    fn eigenbasis_examples() {
        let g = AdmissibleGraph::builtin("g4").unwrap();
        let space = InvariantSpace::new(&[1, 1, 1, 1]).unwrap();
        let basis = joint_eigenbasis(&g, &space).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(space.inner(&basis[0].coords, &basis[1].coords).is_zero());

        let space = InvariantSpace::new(&[1, 1, 1, 3]).unwrap();
        let basis = joint_eigenbasis(&g, &space).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].coords, vec![rat(1)]);

        let g = AdmissibleGraph::builtin("cat5").unwrap();
        let space = InvariantSpace::new(&[1, 1, 1, 1, 2]).unwrap();
        let basis = joint_eigenbasis(&g, &space).unwrap();
        assert_eq!(basis.len(), enumerate_colorings(&g, &[1, 1, 1, 1, 2]).len());
        for (i, u) in basis.iter().enumerate() {
            assert!(u.coords.iter().find(|x| !x.is_zero()).unwrap().is_positive());
            for w in &basis[i + 1..] {
                assert!(space.inner(&u.coords, &w.coords).is_zero());
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let g = AdmissibleGraph::builtin("g4").unwrap();
        let gp = AdmissibleGraph::builtin("g4p").unwrap();
        let same = overlap_matrix(&g, &g, &[2, 2, 2, 2]).unwrap();
        for (i, row) in same.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(e.exact_sq, rat((i == j) as i64));
                if i == j {
                    assert_eq!(e.sign, 1);
                }
            }
        }
        let m = overlap_matrix(&g, &gp, &[1, 1, 1, 1]).unwrap();
        assert_eq!(m.squares(), vec![vec![q(1, 4), q(3, 4)], vec![q(3, 4), q(1, 4)]]);
        let m = overlap_matrix(&g, &gp, &[2, 2, 2, 2]).unwrap();
        for i in 0..3 {
            let row: Rational = m.entries[i].iter().map(|e| e.exact_sq.clone()).sum();
            let col: Rational = (0..3).map(|j| m.entries[j][i].exact_sq.clone()).sum();
            assert_eq!(row, rat(1));
            assert_eq!(col, rat(1));
        }
    }

    #[test]
    fn eigenbasis_json_shape() {
        let g = parse_graph("vertex A = h1 h2 e1\nvertex B = e1 h3 h4").unwrap();
        let space = InvariantSpace::new(&[1, 1, 1, 1]).unwrap();
        let basis = joint_eigenbasis(&g, &space).unwrap();
        let v = eigenbasis_json(&g, &basis);
        assert!(v["e1=0"]["coords"].is_array());
        assert!(v["e1=2"]["norm2"].is_string());
    }
}
