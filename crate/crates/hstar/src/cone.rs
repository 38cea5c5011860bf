//! Pointed rational polyhedral cones with exact facet and face data.
//!
//! A cone is stored with its primitive extreme rays, the primitive facet
//! normals of the cone inside its linear span, and a lattice basis of
//! `span(cone) ∩ Z^n`. Facet normals are lifted to ambient coordinates as
//! canonical row-space representatives, so lower-dimensional cones serialize
//! uniquely. The V-to-H conversion runs the double description method in
//! span coordinates, seeded on a simplex subset of the generators and
//! inserting the remaining generators in lexicographic order.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    enumerate_integer_box_int, null_space_int, primitive_vector, rank_int, smith_normal_form,
    solve_linear, solve_rational, unimodular_inverse, IntMatrix, IntVec, RatVec,
};
use crate::poset::GradedPoset;

#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    dim: usize,
    rays: Vec<IntVec>,
    rays_span: Vec<IntVec>,
    facet_normals: Vec<IntVec>,
    facet_normals_span: Vec<IntVec>,
    span_basis: IntMatrix,
    span_orth: Vec<IntVec>,
}

/// The integral level functional of a Gorenstein cone, stored in ambient
/// coordinates as the canonical row-space representative. For cones of less
/// than full dimension the entries may be rational even though every value
/// on the span lattice is an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinForm {
    covector: RatVec,
}

impl GorensteinForm {
    pub fn zero(ambient_dim: usize) -> Self {
        GorensteinForm {
            covector: RatVec(vec![BigRational::zero(); ambient_dim]),
        }
    }

    pub fn covector(&self) -> &RatVec {
        &self.covector
    }

    pub fn eval(&self, p: &IntVec) -> BigRational {
        p.dot_rat(&self.covector)
    }

    /// Value on a point of the span lattice; errors on a fractional value.
    pub fn eval_int(&self, p: &IntVec) -> Result<BigInt> {
        let v = self.eval(p);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::internal(format!(
                "level function took fractional value {v} at {p}"
            )))
        }
    }
}

impl Cone {
    /// The zero cone {0} in ambient dimension `n`.
    pub fn zero(ambient_dim: usize) -> Self {
        let span_orth = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient_dim];
                v[i] = BigInt::one();
                IntVec(v)
            })
            .collect();
        Cone {
            ambient_dim,
            dim: 0,
            rays: vec![],
            rays_span: vec![],
            facet_normals: vec![],
            facet_normals_span: vec![],
            span_basis: IntMatrix::zero(ambient_dim, 0),
            span_orth,
        }
    }

    /// Build a cone from arbitrary nonzero generators: redundant generators
    /// are dropped and the stored rays are the primitive extreme rays.
    pub fn from_generators(gens: &[IntVec]) -> Result<Cone> {
        let ambient_dim = gens
            .first()
            .map(IntVec::len)
            .ok_or_else(|| Error::internal("cone from empty generator list"))?;
        let mut prim: Vec<IntVec> = Vec::new();
        for g in gens {
            if g.len() != ambient_dim {
                return Err(Error::internal("generators of mixed dimension"));
            }
            prim.push(primitive_vector(g)?);
        }
        prim.sort();
        prim.dedup();

        let (span_basis, dim) = span_lattice_basis(&prim, ambient_dim);
        let gens_span: Vec<IntVec> = prim
            .iter()
            .map(|g| span_coordinates(&span_basis, g))
            .collect::<Result<_>>()?;

        // Facets of the full-dimensional cone in span coordinates.
        let normals_span = dual_extreme_rays(&gens_span, dim)?;
        if rank_int(&normals_span) != dim {
            return Err(Error::NotPointed);
        }

        // A generator is an extreme ray exactly when the facets through it
        // cut its dimension down to one.
        let mut rays = Vec::new();
        for (g, gs) in prim.iter().zip(gens_span.iter()) {
            let active: Vec<IntVec> = normals_span
                .iter()
                .filter(|n| n.dot(gs).is_zero())
                .cloned()
                .collect();
            if rank_int(&active) == dim - 1 {
                rays.push(g.clone());
            }
        }
        rays.sort();

        // Recompute the span basis from the extreme rays only, so that equal
        // cones get identical span coordinates regardless of how they were
        // generated.
        let (span_basis, dim2) = span_lattice_basis(&rays, ambient_dim);
        debug_assert_eq!(dim, dim2);
        let rays_span: Vec<IntVec> = rays
            .iter()
            .map(|g| span_coordinates(&span_basis, g))
            .collect::<Result<_>>()?;
        let mut facet_normals_span = dual_extreme_rays(&rays_span, dim)?;
        facet_normals_span.sort();
        let mut facet_normals: Vec<IntVec> = facet_normals_span
            .iter()
            .map(|n| lift_covector(&span_basis, n))
            .collect::<Result<_>>()?;
        let perm = sort_permutation(&mut facet_normals);
        facet_normals_span = perm
            .into_iter()
            .map(|i| facet_normals_span[i].clone())
            .collect();

        let basis_cols: Vec<IntVec> = (0..dim).map(|j| span_basis.col(j)).collect();
        let span_orth = null_space_int(
            &basis_cols,
            ambient_dim,
        );

        Ok(Cone {
            ambient_dim,
            dim,
            rays,
            rays_span,
            facet_normals,
            facet_normals_span,
            span_basis,
            span_orth,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero_cone(&self) -> bool {
        self.dim == 0
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    /// Rays written in the span lattice basis.
    pub fn rays_span(&self) -> &[IntVec] {
        &self.rays_span
    }

    /// Primitive facet normals, lifted to ambient coordinates as row-space
    /// representatives. Each is nonnegative on the cone and vanishes on a
    /// facet.
    pub fn facet_normals(&self) -> &[IntVec] {
        &self.facet_normals
    }

    /// Lattice basis of `span(cone) ∩ Z^n` as matrix columns.
    pub fn span_basis(&self) -> &IntMatrix {
        &self.span_basis
    }

    pub fn in_span(&self, p: &IntVec) -> bool {
        self.span_orth.iter().all(|y| y.dot(p).is_zero())
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        if self.dim == 0 {
            return p.is_zero();
        }
        self.in_span(p) && self.facet_normals.iter().all(|n| !n.dot(p).is_negative())
    }

    /// Membership in the relative interior (all facet inequalities strict).
    pub fn contains_strictly(&self, p: &IntVec) -> bool {
        if self.dim == 0 {
            return p.is_zero();
        }
        self.in_span(p) && self.facet_normals.iter().all(|n| n.dot(p).is_positive())
    }

    pub fn contains_rat(&self, p: &RatVec) -> bool {
        if self.dim == 0 {
            return p.0.iter().all(|x| x.is_zero());
        }
        self.span_orth
            .iter()
            .all(|y| y.dot_rat(p).is_zero())
            && self
                .facet_normals
                .iter()
                .all(|n| !n.dot_rat(p).is_negative())
    }

    /// An integral covector with value 1 on all rays and integer values on
    /// the span lattice, as a canonical row-space representative. The zero
    /// cone gets the zero covector.
    pub fn gorenstein_form(&self) -> Result<GorensteinForm> {
        if self.dim == 0 {
            return Ok(GorensteinForm::zero(self.ambient_dim));
        }
        let a = IntMatrix::from_rows(&self.rays);
        let ones = RatVec(vec![BigRational::one(); self.rays.len()]);
        let covector =
            solve_rational(&a, &ones).ok_or(Error::NoRationalSolution { cone: None })?;
        let form = GorensteinForm { covector };
        for j in 0..self.dim {
            let b = self.span_basis.col(j);
            if !form.eval(&b).is_integer() {
                let witness = self.fractional_witness(&form).ok_or_else(|| {
                    Error::internal("integrality failed but no witness in the ray box")
                })?;
                let value = form.eval(&witness);
                return Err(Error::NonIntegral {
                    cone: None,
                    witness: witness.to_string(),
                    value,
                });
            }
        }
        Ok(form)
    }

    /// First lattice point of the cone, in lexicographic order over the box
    /// spanned by the rays, where the rational level functional takes a
    /// fractional value.
    fn fractional_witness(&self, form: &GorensteinForm) -> Option<IntVec> {
        let n = self.ambient_dim;
        let mut lo = vec![BigInt::zero(); n];
        let mut hi = vec![BigInt::zero(); n];
        for r in &self.rays {
            for k in 0..n {
                let a = &r.0[k];
                if a.is_negative() {
                    lo[k] += a;
                } else {
                    hi[k] += a;
                }
            }
        }
        enumerate_integer_box_int(&lo, &hi)
            .find(|p| self.contains(p) && !form.eval(p).is_integer())
    }

    /// All faces, each realized as a cone, ordered by dimension then rays.
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        if self.dim == 0 {
            return Ok(FaceLattice {
                faces: vec![Cone::zero(self.ambient_dim)],
            });
        }
        let nf = self.facet_normals_span.len();
        let mut ray_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u64..(1u64 << nf) {
            let members: Vec<usize> = (0..self.rays.len())
                .filter(|&i| {
                    (0..nf).all(|f| {
                        mask & (1 << f) == 0
                            || self.facet_normals_span[f].dot(&self.rays_span[i]).is_zero()
                    })
                })
                .collect();
            ray_sets.insert(members);
        }
        let mut faces = Vec::with_capacity(ray_sets.len());
        for set in ray_sets {
            if set.is_empty() {
                faces.push(Cone::zero(self.ambient_dim));
            } else {
                let gens: Vec<IntVec> = set.iter().map(|&i| self.rays[i].clone()).collect();
                faces.push(Cone::from_generators(&gens)?);
            }
        }
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        Ok(FaceLattice { faces })
    }

    /// Cache key: the sorted ray matrix in span-lattice coordinates, which
    /// is deterministic for a given ray set. Equal keys imply the cones are
    /// identified by a lattice isomorphism of their spans, so cached
    /// quantities that only depend on that structure can be reused.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut cols: Vec<String> = self
            .rays_span
            .iter()
            .map(|r| {
                r.0.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        cols.sort();
        format!("{}|{}", self.dim, cols.join(";")).into_bytes()
    }
}

impl std::fmt::Debug for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cone(dim {}, rays", self.dim)?;
        for r in &self.rays {
            write!(f, " {r}")?;
        }
        write!(f, ")")
    }
}

/// Face lattice of a single cone: all faces ordered by dimension then rays,
/// with containment decided by ray-set inclusion.
pub struct FaceLattice {
    pub faces: Vec<Cone>,
}

impl FaceLattice {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        let a = &self.faces[i];
        let b = &self.faces[j];
        a.rays.iter().all(|r| b.rays.contains(r))
    }

    pub fn poset(&self) -> Result<GradedPoset> {
        GradedPoset::from_leq(self.faces.len(), |i, j| self.leq(i, j))
    }

    /// Interval `[lo, hi]` of the lattice as an abstract graded poset.
    pub fn interval_poset(&self, lo: usize, hi: usize) -> Result<GradedPoset> {
        let full = self.poset()?;
        full.interval(lo, hi)
    }
}

/// Saturated lattice basis of the rational span of `vecs`: columns of the
/// returned matrix generate `span(vecs) ∩ Z^n`.
fn span_lattice_basis(vecs: &[IntVec], ambient_dim: usize) -> (IntMatrix, usize) {
    if vecs.is_empty() {
        return (IntMatrix::zero(ambient_dim, 0), 0);
    }
    let a = IntMatrix::from_cols(vecs);
    let snf = smith_normal_form(&a);
    let d = snf.invariant_factors().len();
    let u_inv = unimodular_inverse(&snf.u);
    let mut basis = IntMatrix::zero(ambient_dim, d);
    for j in 0..d {
        for i in 0..ambient_dim {
            *basis.at_mut(i, j) = u_inv.at(i, j).clone();
        }
    }
    (basis, d)
}

/// Coordinates of a lattice point of the span with respect to the span
/// lattice basis; integral by construction.
fn span_coordinates(basis: &IntMatrix, p: &IntVec) -> Result<IntVec> {
    let rows: Vec<Vec<BigRational>> = (0..basis.rows())
        .map(|i| {
            (0..basis.cols())
                .map(|j| BigRational::from(basis.at(i, j).clone()))
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = p.0.iter().map(|x| BigRational::from(x.clone())).collect();
    let x = solve_linear(&rows, &b)
        .ok_or_else(|| Error::internal("point not in the span of its cone"))?;
    // Verify the solution (solve_linear zeroes free variables, and the
    // basis has full column rank, so this is the unique solution).
    let mut ints = Vec::with_capacity(x.len());
    for xi in &x {
        if !xi.is_integer() {
            return Err(Error::internal(
                "lattice point has non-integral span coordinates",
            ));
        }
        ints.push(xi.to_integer());
    }
    let cand = IntVec(ints);
    if &basis.mul_vec(&cand) != p {
        return Err(Error::internal("span coordinate solve failed"));
    }
    Ok(cand)
}

/// Lift a covector given in span coordinates to the canonical ambient
/// row-space representative: the unique `N` in the span with
/// `N · basis_j = w_j`, scaled to a primitive integer vector.
fn lift_covector(basis: &IntMatrix, w: &IntVec) -> Result<IntVec> {
    let bt = basis.transpose();
    let rhs = RatVec(w.0.iter().map(|x| BigRational::from(x.clone())).collect());
    let sol = solve_rational(&bt, &rhs)
        .ok_or_else(|| Error::internal("facet normal lift is inconsistent"))?;
    sol.to_primitive_int()
}

fn sort_permutation(v: &mut Vec<IntVec>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].cmp(&v[b]));
    let sorted: Vec<IntVec> = idx.iter().map(|&i| v[i].clone()).collect();
    *v = sorted;
    idx
}

/// Extreme rays of the dual cone `{y : y · g >= 0 for all g}` of a
/// full-dimensional cone in `Z^d`, which are the facet normals of the primal
/// cone. Double description: seed on the first `d` linearly independent
/// generators, then insert the remaining generators in order, combining
/// positive and negative rays across each new hyperplane and keeping exactly
/// the candidates whose active generator set has rank `d - 1`.
fn dual_extreme_rays(gens: &[IntVec], d: usize) -> Result<Vec<IntVec>> {
    if d == 0 {
        return Ok(vec![]);
    }
    let mut seed: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut probe: Vec<IntVec> = seed.iter().map(|&k| gens[k].clone()).collect();
        probe.push(g.clone());
        if rank_int(&probe) > seed.len() {
            seed.push(i);
        }
        if seed.len() == d {
            break;
        }
    }
    if seed.len() < d {
        return Err(Error::internal("generators do not span their span"));
    }

    // Simplex seed: normal i is the primitive null direction of the other
    // seed generators, signed positive on generator i.
    let mut normals: Vec<IntVec> = Vec::with_capacity(d);
    for &i in &seed {
        let others: Vec<IntVec> = seed
            .iter()
            .filter(|&&k| k != i)
            .map(|&k| gens[k].clone())
            .collect();
        let ns = null_space_int(&others, d);
        if ns.len() != 1 {
            return Err(Error::internal("simplex seed normal is not unique"));
        }
        let mut n = ns.into_iter().next().unwrap();
        if n.dot(&gens[i]).is_negative() {
            n = n.neg();
        }
        normals.push(n);
    }

    let mut processed: Vec<IntVec> = seed.iter().map(|&k| gens[k].clone()).collect();
    for (i, g) in gens.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for n in &normals {
            let v = n.dot(g);
            if v.is_positive() {
                pos.push(n.clone());
            } else if v.is_zero() {
                zero.push(n.clone());
            } else {
                neg.push(n.clone());
            }
        }
        processed.push(g.clone());
        if neg.is_empty() {
            continue;
        }
        let mut candidates: BTreeSet<IntVec> = BTreeSet::new();
        for n in pos.iter().chain(zero.iter()) {
            candidates.insert(n.clone());
        }
        for np in &pos {
            for nn in &neg {
                let combo = np.scale(&nn.dot(g)).neg().add(&nn.scale(&np.dot(g)));
                if !combo.is_zero() {
                    candidates.insert(primitive_vector(&combo)?);
                }
            }
        }
        normals = candidates
            .into_iter()
            .filter(|n| {
                let active: Vec<IntVec> = processed
                    .iter()
                    .filter(|w| n.dot(w).is_zero())
                    .cloned()
                    .collect();
                rank_int(&active) == d - 1
            })
            .collect();
    }
    Ok(normals)
}
