//! Polygon spaces: configurations of vectors with prescribed norms summing to
//! zero, the diagonal-length map λ of a triangulation, its polytope, the
//! bending flows and the dihedral angles conjugate to them.
//!
//! Flow normalization: the Hamiltonian flow of `λ_a` at time `t` rotates the
//! vectors indexed by `I(a)` about their sum by the angle `2t`, so it is
//! `π`-periodic; the flow of `½λ_a` rotates by `t` and advances `θ_a` at unit
//! rate.

use nalgebra::{Rotation3, Unit, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{AdmissibleGraph, Slot};

pub type Vec3 = Vector3<f64>;

pub const CLOSURE_TOL: f64 = 1e-9;
pub const GRAM_TOL: f64 = 1e-8;
pub const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub vectors: Vec<Vec3>,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson(Vec<[f64; 3]>);

impl Configuration {
    pub fn new(vectors: Vec<Vec3>) -> Self {
        Configuration { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sum(&self, members: &[usize]) -> Vec3 {
        members.iter().map(|&i| self.vectors[i - 1]).sum()
    }

    /// Checks closure and side lengths against `ell`.
    pub fn validate(&self, ell: &[f64]) -> Result<()> {
        if ell.len() != self.vectors.len() {
            return Err(Error::BoundaryMismatch(format!(
                "{} vectors for {} lengths",
                self.vectors.len(),
                ell.len()
            )));
        }
        let total: f64 = ell.iter().sum();
        let closure = self.vectors.iter().sum::<Vec3>().norm();
        if closure > CLOSURE_TOL * total {
            return Err(Error::InvalidArgument(format!("configuration does not close: |Σx| = {closure:e}")));
        }
        for (i, (x, &l)) in self.vectors.iter().zip(ell).enumerate() {
            if (x.norm() - l).abs() > CLOSURE_TOL * l.max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "|x_{}| = {} but ℓ_{} = {}",
                    i + 1,
                    x.norm(),
                    i + 1,
                    l
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arr: Vec<[f64; 3]> = self.vectors.iter().map(|v| [v.x, v.y, v.z]).collect();
        serde_json::to_value(ConfigurationJson(arr)).expect("configuration serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let ConfigurationJson(arr) = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("configuration json: {e}")))?;
        Ok(Configuration { vectors: arr.into_iter().map(|[x, y, z]| Vec3::new(x, y, z)).collect() })
    }

    fn scale(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300)
    }

    /// Gram matrix `<x_i, x_j>`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|a| self.vectors.iter().map(|b| a.dot(b)).collect()).collect()
    }
}

/// `λ_a = |Σ_{i∈I(a)} x_i|` for every internal edge, in edge order.
pub fn lambda_map(g: &AdmissibleGraph, c: &Configuration) -> Vec<f64> {
    (0..g.internal_edges().len()).map(|e| c.sum(&g.i_set(e)).norm()).collect()
}

/// `h_a = λ_a²`.
pub fn h_map(g: &AdmissibleGraph, c: &Configuration) -> Vec<f64> {
    lambda_map(g, c).into_iter().map(|l| l * l).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// `Δ(ℓ, Γ)`: internal lengths satisfying the triangle inequalities at every
/// vertex, with half-edge slots fixed to `ℓ`.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub graph: AdmissibleGraph,
    pub ell: Vec<f64>,
}

impl Polytope {
    pub fn new(graph: AdmissibleGraph, ell: Vec<f64>) -> Result<Self> {
        if ell.len() != graph.n_half() {
            return Err(Error::BoundaryMismatch(format!(
                "{} lengths for {} half-edges",
                ell.len(),
                graph.n_half()
            )));
        }
        if ell.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::InvalidArgument("side lengths must be positive".into()));
        }
        Ok(Polytope { graph, ell })
    }

    fn tol(&self) -> f64 {
        1e-12 * self.ell.iter().sum::<f64>().max(1.0)
    }

    fn slot_length(&self, d: &[f64], s: Slot) -> f64 {
        match s {
            Slot::Half(k) => self.ell[k - 1],
            Slot::Internal(e) => d[e],
        }
    }

    /// Smallest slack over all vertex triangle inequalities.
    fn min_slack(&self, d: &[f64]) -> f64 {
        let mut slack = f64::INFINITY;
        for v in self.graph.vertices() {
            let [a, b, c] = v.slots.map(|s| self.slot_length(d, s));
            slack = slack.min(b + c - a).min(a + c - b).min(a + b - c);
        }
        slack
    }

    pub fn membership(&self, d: &[f64]) -> Membership {
        assert_eq!(d.len(), self.graph.internal_edges().len(), "one value per internal edge");
        let tol = self.tol();
        let slack = self.min_slack(d).min(d.iter().copied().fold(f64::INFINITY, f64::min));
        if slack < -tol {
            Membership::Outside
        } else if slack <= tol {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    /// Rejection sample from the box `[0, Σℓ/2]^{E_int}`; `None` if no
    /// interior point was hit in `tries` draws.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, tries: usize) -> Option<Vec<f64>> {
        let half: f64 = self.ell.iter().sum::<f64>() / 2.0;
        let ne = self.graph.internal_edges().len();
        (0..tries).find_map(|_| {
            let d: Vec<f64> = (0..ne).map(|_| rng.gen::<f64>() * half).collect();
            (self.membership(&d) == Membership::Interior).then_some(d)
        })
    }
}

/// `P` with `|P| = a` and `|target - P| = b`, in the xy-plane on the left of
/// `target`.
fn place_side(target: Vec3, a: f64, b: f64) -> Vec3 {
    let c = target.norm();
    if c < AXIS_TOL {
        return Vec3::new(a, 0.0, 0.0);
    }
    let u = target / c;
    let along = (a * a - b * b + c * c) / (2.0 * c);
    let h = (a * a - along * along).max(0.0).sqrt();
    let perp = Vec3::z().cross(&u);
    u * along + perp * h
}

/// Planar configuration with `λ = d`, laid out triangle by triangle from
/// vertex 0 of the graph.
pub fn realize(g: &AdmissibleGraph, ell: &[f64], d: &[f64]) -> Result<Configuration> {
    let poly = Polytope::new(g.clone(), ell.to_vec())?;
    if d.len() != g.internal_edges().len() {
        return Err(Error::InvalidArgument(format!(
            "{} internal values for {} internal edges",
            d.len(),
            g.internal_edges().len()
        )));
    }
    if poly.membership(d) == Membership::Outside {
        return Err(Error::Outside);
    }
    let len = |s: Slot| poly.slot_length(d, s);
    let mut x = vec![Vec3::zeros(); g.n_half()];
    // Outgoing edge vectors w(v, s) = Σ over half-edges beyond slot s.
    let mut assign = |v: usize, s: Slot, w: Vec3, stack: &mut Vec<(usize, Slot, Vec3)>| match s {
        Slot::Half(k) => x[k - 1] = w,
        Slot::Internal(_) => {
            let child = g.neighbor(v, s).unwrap();
            stack.push((child, s, -w));
        }
    };
    let mut stack = Vec::new();
    let root = &g.vertices()[0];
    let [s0, s1, s2] = root.slots;
    let w0 = Vec3::new(len(s0), 0.0, 0.0);
    let w1 = place_side(-w0, len(s1), len(s2));
    assign(0, s0, w0, &mut stack);
    assign(0, s1, w1, &mut stack);
    assign(0, s2, -w0 - w1, &mut stack);
    while let Some((v, incoming, w_in)) = stack.pop() {
        let others: Vec<Slot> = g.vertices()[v].slots.iter().copied().filter(|&s| s != incoming).collect();
        let wf = place_side(-w_in, len(others[0]), len(others[1]));
        assign(v, others[0], wf, &mut stack);
        assign(v, others[1], -w_in - wf, &mut stack);
    }
    Ok(Configuration { vectors: x })
}

/// Rotates `{x_i : i ∈ members}` by `angle` about their sum.
pub fn rotate_subset(c: &Configuration, members: &[usize], angle: f64) -> Result<Configuration> {
    let axis = c.sum(members);
    let norm = axis.norm();
    if norm <= AXIS_TOL {
        return Err(Error::AxisVanishes(norm));
    }
    let rot = Rotation3::from_axis_angle(&Unit::new_unchecked(axis / norm), angle);
    let mut out = c.clone();
    for &i in members {
        out.vectors[i - 1] = rot * c.vectors[i - 1];
    }
    Ok(out)
}

/// Hamiltonian flow of `|Σ_{i∈I} x_i|` at time `t`: rotation by `2t`.
pub fn bend(c: &Configuration, members: &[usize], t: f64) -> Result<Configuration> {
    rotate_subset(c, members, 2.0 * t)
}

/// Equality in the moduli space: equal Gram matrices plus agreement of the
/// orientation of the most non-degenerate triple.
pub fn moduli_equal(c1: &Configuration, c2: &Configuration) -> bool {
    if c1.len() != c2.len() {
        return false;
    }
    let scale = c1.scale().max(c2.scale());
    let (g1, g2) = (c1.gram(), c2.gram());
    let gram_tol = GRAM_TOL * scale.max(1.0).powi(2);
    for (r1, r2) in g1.iter().zip(&g2) {
        for (a, b) in r1.iter().zip(r2) {
            if (a - b).abs() > gram_tol {
                return false;
            }
        }
    }
    let n = c1.len();
    let mut best = (0.0f64, 0, 0, 0);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let det = c1.vectors[i].dot(&c1.vectors[j].cross(&c1.vectors[k]));
                if det.abs() > best.0.abs() {
                    best = (det, i, j, k);
                }
            }
        }
    }
    let (det1, i, j, k) = best;
    if det1.abs() <= GRAM_TOL * scale.max(1.0).powi(3) {
        // planar: the mirror image is a rotation
        return true;
    }
    let det2 = c2.vectors[i].dot(&c2.vectors[j].cross(&c2.vectors[k]));
    det1 * det2 > 0.0
}

fn outgoing(g: &AdmissibleGraph, c: &Configuration, v: usize, s: Slot) -> Vec3 {
    c.sum(&g.far_side(v, s))
}

/// Dihedral angle at internal edge `edge` (index), in `[0, 2π)`.
///
/// Measured about the oriented axis `Σ_{i∈I(a)} x_i`, from the head face to
/// the tail face. Each face is represented by its first slot other than the
/// edge itself; coplanar faces give `0` or `π`.
pub fn theta_angle(g: &AdmissibleGraph, c: &Configuration, edge: usize) -> Result<f64> {
    let e = &g.internal_edges()[edge];
    let axis = c.sum(&g.i_set(edge));
    let scale = c.scale();
    if axis.norm() <= AXIS_TOL * scale.max(1.0) {
        return Err(Error::AxisVanishes(axis.norm()));
    }
    let u = axis.normalize();
    let reference = |v: usize| -> Vec3 {
        let s = *g.vertices()[v]
            .slots
            .iter()
            .find(|&&s| s != Slot::Internal(edge))
            .expect("trivalent vertex");
        let w = outgoing(g, c, v, s);
        w - u * u.dot(&w)
    };
    let tail = reference(e.tail);
    let head = reference(e.head);
    let tol = 1e-9 * scale.max(1.0);
    if tail.norm() < tol || head.norm() < tol {
        return Err(Error::DegenerateFace(e.id.clone()));
    }
    let angle = u.dot(&head.cross(&tail)).atan2(head.dot(&tail));
    Ok(angle.rem_euclid(std::f64::consts::TAU))
}

/// `γ_a = ½(λ_a + Σ_{i∈I(a)} ℓ_i)`.
pub fn gamma_action(g: &AdmissibleGraph, ell: &[f64], c: &Configuration, edge: usize) -> f64 {
    let members = g.i_set(edge);
    let lambda = c.sum(&members).norm();
    0.5 * (lambda + members.iter().map(|&i| ell[i - 1]).sum::<f64>())
}

/// Point of the torus fiber over `d`: the planar realization moved by the
/// flows of `½λ_a` for the given times (one per internal edge, edge order).
pub fn torus_point(g: &AdmissibleGraph, ell: &[f64], d: &[f64], angles: &[f64]) -> Result<Configuration> {
    let mut c = realize(g, ell, d)?;
    for (e, &t) in angles.iter().enumerate() {
        c = rotate_subset(&c, &g.i_set(e), t)?;
    }
    Ok(c)
}

/// Observables with closed-form Hamiltonian flows, plus the angles.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// `scale · |Σ_{i∈members} x_i|`.
    Length { members: Vec<usize>, scale: f64 },
    /// `θ_a` for the internal edge at this index.
    Theta(usize),
}

impl Observable {
    pub fn lambda(g: &AdmissibleGraph, edge: usize) -> Self {
        Observable::Length { members: g.i_set(edge), scale: 1.0 }
    }

    pub fn half_lambda(g: &AdmissibleGraph, edge: usize) -> Self {
        Observable::Length { members: g.i_set(edge), scale: 0.5 }
    }

    pub fn eval(&self, g: &AdmissibleGraph, c: &Configuration) -> Result<f64> {
        match self {
            Observable::Length { members, scale } => Ok(scale * c.sum(members).norm()),
            Observable::Theta(e) => theta_angle(g, c, *e),
        }
    }

    /// Hamiltonian flow at time `t`.
    pub fn flow(&self, c: &Configuration, t: f64) -> Result<Configuration> {
        match self {
            Observable::Length { members, scale } => bend(c, members, scale * t),
            Observable::Theta(_) => {
                Err(Error::InvalidArgument("no closed-form flow for an angle observable".into()))
            }
        }
    }
}

/// `{f, h}(c) = d/dt h(Φ_f^t c)` at `t = 0`, by central differences.
pub fn poisson_bracket_fd(
    g: &AdmissibleGraph,
    c: &Configuration,
    f: &Observable,
    h: &Observable,
    step: f64,
) -> Result<f64> {
    let plus = h.eval(g, &f.flow(c, step)?)?;
    let minus = h.eval(g, &f.flow(c, -step)?)?;
    let mut diff = plus - minus;
    if matches!(h, Observable::Theta(_)) {
        diff = (diff + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    }
    Ok(diff / (2.0 * step))
}
