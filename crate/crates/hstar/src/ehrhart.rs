//! Lattice-point counting along the Gorenstein grading.
//!
//! Counts are exact and brute force: the level-j cross-section of a cone is
//! the j-th dilate of the convex hull of its rays, so its integer points lie
//! in an explicit box and membership is decided by facet signs. The
//! delta-series numerator is recovered from the first few level counts by
//! finite differences, which is exact because of the degree bound on the
//! numerator. Simplicial cones also get an algebraic path through the box
//! points of the fundamental parallelepiped, enumerated from Smith normal
//! form coset representatives; the two paths must agree and this is checked
//! on every call.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cone::{Cone, GorensteinForm};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{
    binomial, enumerate_integer_box_int, smith_normal_form, solve_linear, unimodular_inverse,
    IntMatrix, IntVec,
};
use crate::poly::IntPolynomial;

/// A rational generating series `numerator / (1 - t)^denominator_power`
/// with a nonnegative integer numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSeries {
    numerator: IntPolynomial,
    denominator_power: usize,
}

impl DeltaSeries {
    fn new(numerator: IntPolynomial, denominator_power: usize) -> Result<DeltaSeries> {
        if !numerator.is_nonnegative() {
            return Err(Error::internal(format!(
                "delta numerator {numerator} has a negative coefficient"
            )));
        }
        Ok(DeltaSeries {
            numerator,
            denominator_power,
        })
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator_power(&self) -> usize {
        self.denominator_power
    }
}

/// The lattice points of the half-open fundamental parallelepiped of a
/// simplicial cone, graded by the level function.
#[derive(Clone, Debug)]
pub struct BoxPoint {
    pub point: IntVec,
    pub degree: usize,
    /// All generator coordinates strictly positive: the cone is the minimal
    /// face whose box contains this point.
    pub interior: bool,
}

#[derive(Clone, Debug)]
pub struct BoxPointSet {
    pub points: Vec<BoxPoint>,
}

impl BoxPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of `t^degree` over all box points.
    pub fn polynomial(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for p in &self.points {
            acc = acc.add(&IntPolynomial::monomial(p.degree));
        }
        acc
    }

    /// Sum of `t^degree` over the interior box points.
    pub fn interior_polynomial(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for p in self.points.iter().filter(|p| p.interior) {
            acc = acc.add(&IntPolynomial::monomial(p.degree));
        }
        acc
    }
}

/// Number of lattice points of the cone at level `j`.
pub fn level_count_cone(cone: &Cone, form: &GorensteinForm, j: usize) -> Result<BigInt> {
    if j == 0 {
        return Ok(BigInt::from(1));
    }
    if cone.dim() == 0 {
        return Ok(BigInt::zero());
    }
    let level = BigRational::from(BigInt::from(j));
    let (lo, hi) = level_box(cone, j);
    let mut count = BigInt::zero();
    for p in enumerate_integer_box_int(&lo, &hi) {
        if form.eval(&p) == level && cone.contains(&p) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of lattice points of the relative interior of the cone at level
/// `j` (used by the inclusion-exclusion cross-check of the fan counts).
pub fn level_count_cone_interior(cone: &Cone, form: &GorensteinForm, j: usize) -> Result<BigInt> {
    if cone.dim() == 0 {
        return Ok(BigInt::from(usize::from(j == 0)));
    }
    if j == 0 {
        return Ok(BigInt::zero());
    }
    let level = BigRational::from(BigInt::from(j));
    let (lo, hi) = level_box(cone, j);
    let mut count = BigInt::zero();
    for p in enumerate_integer_box_int(&lo, &hi) {
        if form.eval(&p) == level && cone.contains_strictly(&p) {
            count += 1;
        }
    }
    Ok(count)
}

/// Coordinate bounds of the level-j cross-section `j * conv(rays)`.
fn level_box(cone: &Cone, j: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = cone.ambient_dim();
    let jj = BigInt::from(j);
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut min = cone.rays()[0].0[k].clone();
        let mut max = min.clone();
        for r in cone.rays().iter().skip(1) {
            if r.0[k] < min {
                min = r.0[k].clone();
            }
            if r.0[k] > max {
                max = r.0[k].clone();
            }
        }
        lo[k] = min * &jj;
        hi[k] = max * &jj;
    }
    (lo, hi)
}

/// Number of lattice points of the fan support at level `j` of the
/// conewise-linear level function. Points on shared faces are counted once.
pub fn level_count_fan(fan: &Fan, j: usize) -> Result<BigInt> {
    fan.require_gorenstein()?;
    if j == 0 {
        return Ok(BigInt::from(1));
    }
    let level = BigRational::from(BigInt::from(j));
    let sets: Vec<HashSet<IntVec>> = fan
        .maximal_ids()
        .par_iter()
        .map(|&id| {
            let cone = fan.cone(id).expect("maximal id");
            let form = fan.k_form(id).expect("gorenstein checked");
            let mut set = HashSet::new();
            if cone.dim() == 0 {
                return set;
            }
            let (lo, hi) = level_box(cone, j);
            for p in enumerate_integer_box_int(&lo, &hi) {
                if form.eval(&p) == level && cone.contains(&p) {
                    set.insert(p);
                }
            }
            set
        })
        .collect();
    let mut all = HashSet::new();
    for s in sets {
        all.extend(s);
    }
    Ok(BigInt::from(all.len()))
}

/// Delta-series of a Gorenstein cone: numerator over `(1 - t)^dim`.
///
/// The numerator has degree at most `dim - 1` and is computed from the level
/// counts at `j = 0..dim-1` by finite differences. For simplicial cones the
/// box-point polynomial is computed as well and the two must agree exactly.
pub fn delta_of_cone(cone: &Cone, form: &GorensteinForm) -> Result<DeltaSeries> {
    let d = cone.dim();
    if d == 0 {
        return DeltaSeries::new(IntPolynomial::one(), 0);
    }
    let counts: Vec<BigInt> = (0..d)
        .into_par_iter()
        .map(|j| level_count_cone(cone, form, j))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(d);
    for k in 0..d {
        let mut acc = BigInt::zero();
        for i in 0..=k {
            let term = binomial(d, i) * &counts[k - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        coeffs.push(acc);
    }
    let numerator = IntPolynomial::from_coeffs(coeffs);
    if cone.is_simplicial() {
        let box_poly = box_points(cone, form)?.polynomial();
        if box_poly != numerator {
            return Err(Error::internal(format!(
                "simplicial delta mismatch: counting gives {numerator}, box gives {box_poly}"
            )));
        }
    }
    DeltaSeries::new(numerator, d)
}

/// Delta-series of a complete Gorenstein fan: numerator over
/// `(1 - t)^n` with `n` the ambient dimension, from the level counts at
/// `j = 0..n`.
pub fn delta_of_complex(fan: &Fan) -> Result<DeltaSeries> {
    fan.require_gorenstein()?;
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = fan.ambient_dim();
    let counts: Vec<BigInt> = (0..=n)
        .map(|j| level_count_fan(fan, j))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = BigInt::zero();
        for i in 0..=k {
            let term = binomial(n, i) * &counts[k - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        coeffs.push(acc);
    }
    DeltaSeries::new(IntPolynomial::from_coeffs(coeffs), n)
}

/// Lattice points of the half-open parallelepiped
/// `{a_1 v_1 + ... + a_d v_d : 0 <= a_i < 1}` of a simplicial cone, graded
/// by the level function. Enumerated through Smith normal form coset
/// representatives of the quotient of the span lattice by the ray lattice.
pub fn box_points(cone: &Cone, form: &GorensteinForm) -> Result<BoxPointSet> {
    if !cone.is_simplicial() {
        return Err(Error::NotSimplicial {
            rays: cone.rays().len(),
            dim: cone.dim(),
        });
    }
    let d = cone.dim();
    if d == 0 {
        return Ok(BoxPointSet {
            points: vec![BoxPoint {
                point: IntVec::zero(cone.ambient_dim()),
                degree: 0,
                interior: true,
            }],
        });
    }

    let c = IntMatrix::from_cols(cone.rays_span());
    let snf = smith_normal_form(&c);
    let factors: Vec<BigInt> = (0..d).map(|i| snf.s.at(i, i).clone()).collect();
    if factors.iter().any(|f| f.is_zero()) {
        return Err(Error::internal("simplicial cone with singular ray matrix"));
    }
    let u_inv = unimodular_inverse(&snf.u);

    let c_rat: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from(c.at(i, j).clone()))
                .collect()
        })
        .collect();

    let mut points = Vec::new();
    let mut rep = vec![BigInt::zero(); d];
    loop {
        // Coset representative in span coordinates.
        let x = u_inv.mul_vec(&IntVec(rep.clone()));
        // Generator coordinates, reduced into [0, 1).
        let b: Vec<BigRational> =
            x.0.iter().map(|t| BigRational::from(t.clone())).collect();
        let alpha = solve_linear(&c_rat, &b)
            .ok_or_else(|| Error::internal("ray matrix solve failed"))?;
        let fracs: Vec<BigRational> = alpha.iter().map(|a| a - a.floor()).collect();
        let mut reduced = x.clone();
        for (j, a) in alpha.iter().enumerate() {
            let m = a.floor().to_integer();
            if !m.is_zero() {
                reduced = reduced.sub(&c.col(j).scale(&m));
            }
        }
        let point = cone.span_basis().mul_vec(&reduced);
        let degree_value = form.eval(&point);
        if !degree_value.is_integer() || degree_value.is_negative() {
            return Err(Error::internal(format!(
                "box point {point} has level {degree_value}"
            )));
        }
        let degree = degree_value
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::internal("box degree out of range"))?;
        let interior = fracs.iter().all(|f| f.is_positive());
        points.push(BoxPoint {
            point,
            degree,
            interior,
        });

        // Odometer over the coset representatives.
        let mut k = d;
        loop {
            if k == 0 {
                let expected: BigInt = factors.iter().product();
                if BigInt::from(points.len()) != expected {
                    return Err(Error::internal("box enumeration missed cosets"));
                }
                points.sort_by(|a, b| (a.degree, &a.point).cmp(&(b.degree, &b.point)));
                return Ok(BoxPointSet { points });
            }
            k -= 1;
            rep[k] += 1;
            if rep[k] < factors[k] {
                break;
            }
            rep[k] = BigInt::zero();
        }
    }
}

/// Sum of `t^level` over the box points all of whose generator coordinates
/// are strictly positive. The zero cone contributes 1, a ray contributes 0.
pub fn interior_box_polynomial(cone: &Cone, form: &GorensteinForm) -> Result<IntPolynomial> {
    Ok(box_points(cone, form)?.interior_polynomial())
}
