//! Euclidean tetrahedra built from a closed 4-gon: vertices `P0 = 0`,
//! `P1 = u1`, `P2 = u1 + u2`, `P3 = u1 + u2 + u3`, with the two diagonals
//! `|P0P2| = √E` and `|P1P3| = √E′`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, ExactMatrix, Rational};
use crate::polyspace::Configuration;

type Vec3 = Vector3<f64>;

pub const HEIGHT_TOL: f64 = 1e-9;
pub const CM_TOL: f64 = 1e-12;

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite length")
}

fn approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraEdges {
    /// `√E = |P0P2|`
    pub e_h: f64,
    /// `√E′ = |P1P3|`
    pub e_hp: f64,
    pub l: [f64; 4],
}

/// Per-edge values keyed by edge role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeValues {
    pub h: f64,
    pub hp: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

impl EdgeValues {
    fn dot(&self, t: &TetraEdges) -> f64 {
        self.h * t.e_h
            + self.hp * t.e_hp
            + self.l1 * t.l[0]
            + self.l2 * t.l[1]
            + self.l3 * t.l[2]
            + self.l4 * t.l[3]
    }

    pub fn all(&self) -> [f64; 6] {
        [self.h, self.hp, self.l1, self.l2, self.l3, self.l4]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TetraReport {
    #[serde(rename = "V")]
    pub volume: f64,
    pub alpha: EdgeValues,
    pub theta: f64,
    pub area: f64,
    pub omega: f64,
}

impl TetraEdges {
    pub fn new(e_h: f64, e_hp: f64, l: [f64; 4]) -> Result<Self> {
        if [e_h, e_hp].iter().chain(&l).any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidArgument("tetrahedron edge lengths must be positive".into()));
        }
        Ok(TetraEdges { e_h, e_hp, l })
    }

    /// Edge lengths of the tetrahedron spanned by the first three vectors of
    /// a closed 4-gon.
    pub fn from_polygon(u: &[Vec3; 4]) -> Result<Self> {
        TetraEdges::new(
            (u[0] + u[1]).norm(),
            (u[1] + u[2]).norm(),
            [u[0].norm(), u[1].norm(), u[2].norm(), u[3].norm()],
        )
    }

    fn max_length(&self) -> f64 {
        self.l.iter().fold(self.e_h.max(self.e_hp), |a, &b| a.max(b))
    }

    /// `d[i][j] = |PiPj|`.
    fn distances(&self) -> [[f64; 4]; 4] {
        let [l1, l2, l3, l4] = self.l;
        let (a, b) = (self.e_h, self.e_hp);
        [[0.0, l1, a, l4], [l1, 0.0, l2, b], [a, l2, 0.0, l3], [l4, b, l3, 0.0]]
    }

    /// 5×5 Cayley–Menger determinant, exact in the given lengths; equals
    /// `288 V²`.
    pub fn cayley_menger_exact(&self) -> Rational {
        let d = self.distances();
        let m = ExactMatrix::from_fn(5, 5, |i, j| match (i, j) {
            (0, 0) => Rational::zero(),
            (0, _) | (_, 0) => rat(1),
            _ => {
                let x = exact(d[i - 1][j - 1]);
                &x * &x
            }
        });
        m.determinant()
    }

    pub fn cayley_menger(&self) -> f64 {
        approx(&self.cayley_menger_exact())
    }

    /// Volume from the Cayley–Menger determinant.
    pub fn volume(&self) -> Result<f64> {
        let cm = self.cayley_menger_exact();
        if approx(&cm) < -CM_TOL * self.max_length().powi(6) {
            return Err(Error::NotRealizable);
        }
        Ok(if cm.is_positive() { (approx(&(cm / rat(288)))).sqrt() } else { 0.0 })
    }

    /// `P0 = 0`, `P1` on the x-axis, `P2` in the xy-plane (y ≥ 0), `P3`
    /// with z ≥ 0. Squared coordinates are formed exactly from the lengths,
    /// so each coordinate carries a single rounding.
    pub fn realize(&self) -> Result<[Vec3; 4]> {
        let d = self.distances();
        let scale = self.max_length();
        let tol = HEIGHT_TOL * scale;
        let triangle_ok = |a: f64, b: f64, c: f64| a + b >= c - tol && a + c >= b - tol && b + c >= a - tol;
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if !triangle_ok(d[i][j], d[i][k], d[j][k]) {
                return Err(Error::NotRealizable);
            }
        }
        let sq = |i: usize, j: usize| {
            let x = exact(d[i][j]);
            &x * &x
        };
        let two_d01 = rat(2) * exact(d[0][1]);
        let x2 = (sq(0, 2) - sq(1, 2) + sq(0, 1)) / &two_d01;
        let y2sq = sq(0, 2) - &x2 * &x2;
        let y2 = approx(&y2sq).max(0.0).sqrt();
        if y2 < tol {
            return Err(Error::DegenerateTetrahedron);
        }
        let x3 = (sq(0, 3) - sq(1, 3) + sq(0, 1)) / &two_d01;
        // r = y2·y3
        let r = (sq(0, 3) - sq(2, 3) + &x2 * &x2 + &y2sq - rat(2) * &x2 * &x3) / rat(2);
        let z3sq = sq(0, 3) - &x3 * &x3 - &r * &r / &y2sq;
        let z3sq = approx(&z3sq);
        if z3sq < -tol * scale {
            return Err(Error::NotRealizable);
        }
        let z3 = z3sq.max(0.0).sqrt();
        if z3 < tol {
            return Err(Error::DegenerateTetrahedron);
        }
        let y3 = approx(&r).signum() * approx(&(&r * &r / &y2sq)).sqrt();
        Ok([
            Vec3::zeros(),
            Vec3::new(d[0][1], 0.0, 0.0),
            Vec3::new(approx(&x2), y2, 0.0),
            Vec3::new(approx(&x3), y3, z3),
        ])
    }

    /// Volume from the coordinate realization (triple product / 6).
    pub fn volume_from_coordinates(&self) -> Result<f64> {
        let [p0, p1, p2, p3] = self.realize()?;
        Ok(((p1 - p0).dot(&(p2 - p0).cross(&(p3 - p0))) / 6.0).abs())
    }

    /// Exterior dihedral angles, `π` minus the interior ones.
    pub fn exterior_dihedrals(&self) -> Result<EdgeValues> {
        let p = self.realize()?;
        // Interior angle along edge (i, j) between faces through k and l.
        let interior = |i: usize, j: usize, k: usize, l: usize| -> f64 {
            let axis = (p[j] - p[i]).normalize();
            let perp = |q: Vec3| {
                let w = q - p[i];
                w - axis * axis.dot(&w)
            };
            let (a, b) = (perp(p[k]), perp(p[l]));
            (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
        };
        let ext = |i, j, k, l| PI - interior(i, j, k, l);
        Ok(EdgeValues {
            h: ext(0, 2, 1, 3),
            hp: ext(1, 3, 0, 2),
            l1: ext(0, 1, 2, 3),
            l2: ext(1, 2, 0, 3),
            l3: ext(2, 3, 0, 1),
            l4: ext(0, 3, 1, 2),
        })
    }

    /// `θ(E, E′)`: exterior dihedrals weighted by edge lengths.
    pub fn theta_phase(&self) -> Result<f64> {
        Ok(self.exterior_dihedrals()?.dot(self))
    }

    /// `A(E, E′) = π Σℓᵢ − θ(E, E′)`.
    pub fn area(&self) -> Result<f64> {
        Ok(PI * self.l.iter().sum::<f64>() - self.theta_phase()?)
    }

    /// `|ω(X, X′)| = 3V / √(EE′)`.
    pub fn omega(&self) -> Result<f64> {
        self.realize()?;
        Ok(3.0 * self.volume()? / (self.e_h * self.e_hp))
    }

    /// The closed 4-gon `u1..u4` of the realization.
    pub fn configuration(&self) -> Result<Configuration> {
        let [p0, p1, p2, p3] = self.realize()?;
        Ok(Configuration::new(vec![p1 - p0, p2 - p1, p3 - p2, p0 - p3]))
    }

    pub fn report(&self) -> Result<TetraReport> {
        let alpha = self.exterior_dihedrals()?;
        let theta = alpha.dot(self);
        Ok(TetraReport {
            volume: self.volume()?,
            alpha,
            theta,
            area: PI * self.l.iter().sum::<f64>() - theta,
            omega: self.omega()?,
        })
    }
}
