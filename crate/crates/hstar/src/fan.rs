//! Fans: face-closed collections of pointed cones with pairwise face
//! intersections, the conewise-linear Gorenstein level function, stars and
//! face intervals.
//!
//! Cone ids are deterministic: cones are sorted by dimension and then by
//! their lexicographic ray matrix, so identical input files always produce
//! identical ids and reports.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cone::{Cone, GorensteinForm};
use crate::error::{Error, Result};
use crate::linalg::{null_space_int, IntVec, RatVec};
use crate::poset::GradedPoset;

pub type ConeId = usize;

#[derive(Clone)]
pub struct Fan {
    ambient_dim: usize,
    cones: Vec<Cone>,
    leq: Vec<Vec<bool>>,
    maximal: Vec<ConeId>,
    k_forms: Option<HashMap<ConeId, GorensteinForm>>,
}

impl Fan {
    /// Face-close the given maximal cones into a fan, checking pairwise that
    /// cones intersect in common faces.
    pub fn from_max_cones(ambient_dim: usize, max_cone_rays: &[Vec<IntVec>]) -> Result<Fan> {
        let mut input: Vec<Cone> = Vec::new();
        for rays in max_cone_rays {
            let c = Cone::from_generators(rays)?;
            if c.ambient_dim() != ambient_dim {
                return Err(Error::Parse {
                    message: "cone rays do not match the ambient dimension".into(),
                });
            }
            input.push(c);
        }
        input.sort_by(|a, b| (a.dim(), a.rays()).cmp(&(b.dim(), b.rays())));
        input.dedup_by(|a, b| a.rays() == b.rays());

        // Pairwise compatibility is checked on the input cones; faces of
        // compatible cones are automatically compatible.
        let offending: Option<(usize, usize)> = (0..input.len())
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..input.len()).map(move |j| (i, j)))
            .find_map_any(|(i, j)| {
                match pair_is_compatible(&input[i], &input[j]) {
                    Ok(true) => None,
                    _ => Some((i, j)),
                }
            });
        if let Some((i, j)) = offending {
            return Err(Error::InvalidFan {
                a: i,
                b: j,
                rays_a: format!("{:?}", input[i].rays()),
                rays_b: format!("{:?}", input[j].rays()),
            });
        }

        // Face closure, deduplicated by ray set.
        let mut by_rays: BTreeMap<Vec<IntVec>, Cone> = BTreeMap::new();
        by_rays.insert(vec![], Cone::zero(ambient_dim));
        for c in &input {
            for face in c.face_lattice()?.faces {
                by_rays.entry(face.rays().to_vec()).or_insert(face);
            }
        }
        let mut cones: Vec<Cone> = by_rays.into_values().collect();
        cones.sort_by(|a, b| (a.dim(), a.rays()).cmp(&(b.dim(), b.rays())));

        let n = cones.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = cones[i]
                    .rays()
                    .iter()
                    .all(|r| cones[j].rays().contains(r));
            }
        }
        let maximal: Vec<ConeId> = (0..n)
            .filter(|&i| (0..n).all(|j| j == i || !leq[i][j]))
            .collect();

        Ok(Fan {
            ambient_dim,
            cones,
            leq,
            maximal,
            k_forms: None,
        })
    }

    /// The fan consisting of only the zero cone.
    pub fn trivial(ambient_dim: usize) -> Fan {
        Fan::from_max_cones(ambient_dim, &[]).expect("trivial fan is valid")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> Result<&Cone> {
        self.cones.get(id).ok_or(Error::UnknownCone { id })
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn maximal_ids(&self) -> &[ConeId] {
        &self.maximal
    }

    pub fn leq(&self, a: ConeId, b: ConeId) -> bool {
        self.leq[a][b]
    }

    /// Number of cones of each dimension `1..=ambient_dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0usize; self.ambient_dim];
        for c in &self.cones {
            if c.dim() > 0 {
                f[c.dim() - 1] += 1;
            }
        }
        f
    }

    /// Id of the zero cone (always present).
    pub fn zero_cone_id(&self) -> ConeId {
        debug_assert!(self.cones[0].is_zero_cone());
        0
    }

    /// The set of cones containing `id`, sorted by dimension then id.
    pub fn star(&self, id: ConeId) -> Result<Vec<ConeId>> {
        if id >= self.cones.len() {
            return Err(Error::UnknownCone { id });
        }
        let mut ids: Vec<ConeId> = (0..self.cones.len())
            .filter(|&j| self.leq[id][j])
            .collect();
        ids.sort_by_key(|&j| (self.cones[j].dim(), j));
        Ok(ids)
    }

    /// The interval `{pi : lo <= pi <= hi}` as a graded poset with the
    /// bottom at rank zero.
    pub fn interval(&self, lo: ConeId, hi: ConeId) -> Result<GradedPoset> {
        if lo >= self.cones.len() {
            return Err(Error::UnknownCone { id: lo });
        }
        if hi >= self.cones.len() {
            return Err(Error::UnknownCone { id: hi });
        }
        if !self.leq[lo][hi] {
            return Err(Error::NotComparable { lo, hi });
        }
        let elems: Vec<ConeId> = (0..self.cones.len())
            .filter(|&j| self.leq[lo][j] && self.leq[j][hi])
            .collect();
        GradedPoset::from_leq(elems.len(), |x, y| self.leq[elems[x]][elems[y]])
    }

    /// Support covers all of R^n: the fan is pure of top dimension, every
    /// ridge lies in exactly two maximal cones, the maximal cones are
    /// connected through ridges, and a probe point in every orthant of a
    /// generic rational direction lies in some maximal cone.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient_dim;
        if n == 0 {
            return true;
        }
        if self.maximal.is_empty()
            || !self
                .maximal
                .iter()
                .all(|&id| self.cones[id].dim() == n)
        {
            return false;
        }
        // Ridge pairing.
        for (id, c) in self.cones.iter().enumerate() {
            if c.dim() + 1 != n {
                continue;
            }
            let count = self
                .maximal
                .iter()
                .filter(|&&m| self.leq[id][m])
                .count();
            if count != 2 {
                return false;
            }
        }
        // Connectivity through ridges.
        if !self.maximal_cones_connected() {
            return false;
        }
        // Exact probe-point location for all sign patterns of a generic
        // rational vector.
        let primes = first_primes(n);
        for mask in 0u64..(1u64 << n) {
            let probe = RatVec(
                (0..n)
                    .map(|i| {
                        let q = BigRational::new(BigInt::one(), BigInt::from(primes[i]));
                        if mask & (1 << i) != 0 {
                            -q
                        } else {
                            q
                        }
                    })
                    .collect(),
            );
            let located = self
                .maximal
                .iter()
                .any(|&m| self.cones[m].contains_rat(&probe));
            if !located {
                return false;
            }
        }
        true
    }

    fn maximal_cones_connected(&self) -> bool {
        let m = self.maximal.len();
        if m <= 1 {
            return true;
        }
        let n = self.ambient_dim;
        let ridge_ids: Vec<ConeId> = (0..self.cones.len())
            .filter(|&id| self.cones[id].dim() + 1 == n)
            .collect();
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, seen_j) in seen.iter_mut().enumerate() {
                if *seen_j {
                    continue;
                }
                let shares_ridge = ridge_ids.iter().any(|&r| {
                    self.leq[r][self.maximal[i]] && self.leq[r][self.maximal[j]]
                });
                if shares_ridge {
                    *seen_j = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Compute the Gorenstein level functional of every maximal cone and
    /// store the conewise function; errors carry the offending cone id.
    pub fn gorenstein_check(mut self) -> Result<Fan> {
        let mut forms = HashMap::new();
        for &id in &self.maximal {
            let form = self.cones[id]
                .gorenstein_form()
                .map_err(|e| Error::NotGorenstein {
                    source: Box::new(e.with_cone(id)),
                })?;
            forms.insert(id, form);
        }
        // Internal assertion: forms agree on shared faces. With primitive
        // rays both forms evaluate to one on every shared ray, which pins
        // them on the shared span.
        for (i, &a) in self.maximal.iter().enumerate() {
            for &b in self.maximal.iter().skip(i + 1) {
                for r in self.cones[a].rays() {
                    if self.cones[b].rays().contains(r)
                        && forms[&a].eval(r) != forms[&b].eval(r)
                    {
                        return Err(Error::Mismatch);
                    }
                }
            }
        }
        self.k_forms = Some(forms);
        Ok(self)
    }

    pub fn is_gorenstein_checked(&self) -> bool {
        self.k_forms.is_some()
    }

    /// Level form of a maximal cone, when `gorenstein_check` has run.
    pub fn k_form(&self, id: ConeId) -> Option<&GorensteinForm> {
        self.k_forms.as_ref().and_then(|m| m.get(&id))
    }

    /// Value of the conewise-linear level function at a support point.
    pub fn k_value(&self, p: &IntVec) -> Option<BigInt> {
        let forms = self.k_forms.as_ref()?;
        for (&id, form) in forms {
            if self.cones[id].contains(p) {
                return form.eval_int(p).ok();
            }
        }
        None
    }

    pub fn require_gorenstein(&self) -> Result<()> {
        if self.k_forms.is_some() {
            Ok(())
        } else {
            Err(Error::NotGorenstein {
                source: Box::new(Error::internal(
                    "gorenstein_check has not been run on this fan",
                )),
            })
        }
    }
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut k = 2u64;
    while primes.len() < n {
        if primes.iter().all(|p| k % p != 0) {
            primes.push(k);
        }
        k += 1;
    }
    primes
}

/// Do two pointed cones intersect in a common face?
fn pair_is_compatible(c1: &Cone, c2: &Cone) -> Result<bool> {
    let common: Vec<IntVec> = c1
        .rays()
        .iter()
        .filter(|r| c2.rays().contains(r))
        .cloned()
        .collect();
    if separation_fast_path(c1, c2, &common) && separation_fast_path(c2, c1, &common) {
        return Ok(true);
    }
    let inter = intersection_rays(c1, c2);
    let f1 = minimal_face_rays(c1, &inter);
    let f2 = minimal_face_rays(c2, &inter);
    Ok(f1.iter().all(|r| c2.contains(r)) && f2.iter().all(|r| c1.contains(r)))
}

/// Sufficient test: the sum of the facets of `c1` vanishing on the common
/// rays cuts `c1` exactly to `cone(common)` and is nonpositive on `c2`. If
/// both directions hold, the intersection is the common-ray cone and it is a
/// face of each.
fn separation_fast_path(c1: &Cone, c2: &Cone, common: &[IntVec]) -> bool {
    let s1: Vec<&IntVec> = c1
        .facet_normals()
        .iter()
        .filter(|n| common.iter().all(|r| n.dot(r).is_zero()))
        .collect();
    if s1.is_empty() {
        return false;
    }
    let zero_set: Vec<&IntVec> = c1
        .rays()
        .iter()
        .filter(|r| s1.iter().all(|n| n.dot(r).is_zero()))
        .collect();
    if zero_set.len() != common.len()
        || !zero_set.iter().all(|r| common.contains(r))
    {
        return false;
    }
    let mut m = IntVec::zero(c1.ambient_dim());
    for n in &s1 {
        m = m.add(n);
    }
    c2.rays().iter().all(|r| !m.dot(r).is_positive())
}

/// Extreme rays of `c1 ∩ c2`, computed exactly inside the intersection of
/// the two spans.
fn intersection_rays(c1: &Cone, c2: &Cone) -> Vec<IntVec> {
    let (d1, d2) = (c1.dim(), c2.dim());
    if d1 == 0 || d2 == 0 {
        return vec![];
    }
    let n = c1.ambient_dim();
    // Null space of [B1 | -B2] gives pairs (a, b) with B1 a = B2 b.
    let rows: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(d1 + d2);
            for j in 0..d1 {
                row.push(c1.span_basis().at(i, j).clone());
            }
            for j in 0..d2 {
                row.push(-c2.span_basis().at(i, j).clone());
            }
            IntVec(row)
        })
        .collect();
    let pairs = null_space_int(&rows, d1 + d2);
    let w_basis: Vec<IntVec> = pairs
        .iter()
        .map(|ab| {
            let mut w = IntVec::zero(n);
            for (j, coef) in ab.0.iter().take(d1).enumerate() {
                w = w.add(&c1.span_basis().col(j).scale(coef));
            }
            w
        })
        .collect();
    let dw = w_basis.len();
    if dw == 0 {
        return vec![];
    }

    let constraints: Vec<IntVec> = c1
        .facet_normals()
        .iter()
        .chain(c2.facet_normals().iter())
        .map(|nrm| IntVec(w_basis.iter().map(|w| nrm.dot(w)).collect()))
        .collect();

    let mut found: Vec<IntVec> = Vec::new();
    let mut push_candidate = |y: IntVec| {
        if constraints.iter().all(|c| !c.dot(&y).is_negative()) {
            found.push(y);
        } else {
            let neg = y.neg();
            if constraints.iter().all(|c| !c.dot(&neg).is_negative()) {
                found.push(neg);
            }
        }
    };
    if dw == 1 {
        push_candidate(IntVec(vec![BigInt::one()]));
    } else {
        for subset in subsets_of_size(constraints.len(), dw - 1) {
            let sub: Vec<IntVec> = subset.iter().map(|&i| constraints[i].clone()).collect();
            let ns = null_space_int(&sub, dw);
            if ns.len() == 1 {
                push_candidate(ns.into_iter().next().unwrap());
            }
        }
    }

    let mut rays: Vec<IntVec> = found
        .into_iter()
        .filter_map(|y| {
            let mut w = IntVec::zero(n);
            for (j, coef) in y.0.iter().enumerate() {
                w = w.add(&w_basis[j].scale(coef));
            }
            if w.is_zero() {
                None
            } else {
                crate::linalg::primitive_vector(&w).ok()
            }
        })
        .collect();
    rays.sort();
    rays.dedup();
    rays
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Rays of the smallest face of `c` containing all the given points.
fn minimal_face_rays(c: &Cone, points: &[IntVec]) -> Vec<IntVec> {
    let active: Vec<&IntVec> = c
        .facet_normals()
        .iter()
        .filter(|nrm| points.iter().all(|p| nrm.dot(p).is_zero()))
        .collect();
    c.rays()
        .iter()
        .filter(|r| active.iter().all(|nrm| nrm.dot(r).is_zero()))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[i64]) -> IntVec {
        IntVec::from_i64(entries)
    }

    pub(crate) fn p2_fan() -> Fan {
        Fan::from_max_cones(
            2,
            &[
                vec![v(&[1, 0]), v(&[0, 1])],
                vec![v(&[0, 1]), v(&[-1, -1])],
                vec![v(&[1, 0]), v(&[-1, -1])],
            ],
        )
        .unwrap()
    }

    pub(crate) fn cube_face_fan() -> Fan {
        let mut max = Vec::new();
        for axis in 0..3 {
            for sign in [1i64, -1] {
                let mut rays = Vec::new();
                for a in [-1i64, 1] {
                    for b in [-1i64, 1] {
                        let mut coords = [0i64; 3];
                        coords[axis] = sign;
                        coords[(axis + 1) % 3] = a;
                        coords[(axis + 2) % 3] = b;
                        rays.push(v(&coords));
                    }
                }
                max.push(rays);
            }
        }
        Fan::from_max_cones(3, &max).unwrap()
    }

    #[test]
    fn p2_fan_has_seven_cones() {
        let fan = p2_fan();
        assert_eq!(fan.len(), 7);
        assert_eq!(fan.f_vector(), vec![3, 3]);
        assert_eq!(fan.maximal_ids().len(), 3);
    }

    #[test]
    fn cube_fan_face_closure_count() {
        // Face closure oracle: 1 + 8 + 12 + 6.
        let fan = cube_face_fan();
        assert_eq!(fan.len(), 27);
        assert_eq!(fan.f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn overlapping_cones_rejected() {
        let r = Fan::from_max_cones(
            2,
            &[
                vec![v(&[1, 0]), v(&[0, 1])],
                vec![v(&[1, 1]), v(&[-1, 1])],
            ],
        );
        assert!(matches!(r, Err(Error::InvalidFan { .. })));
    }

    #[test]
    fn contained_non_face_rejected() {
        let r = Fan::from_max_cones(
            2,
            &[
                vec![v(&[1, 0]), v(&[0, 1])],
                vec![v(&[2, 1]), v(&[1, 2])],
            ],
        );
        assert!(matches!(r, Err(Error::InvalidFan { .. })));
    }

    #[test]
    fn completeness_examples() {
        assert!(p2_fan().is_complete());
        assert!(cube_face_fan().is_complete());

        let partial = Fan::from_max_cones(
            2,
            &[
                vec![v(&[1, 0]), v(&[0, 1])],
                vec![v(&[0, 1]), v(&[-1, -1])],
            ],
        )
        .unwrap();
        assert!(!partial.is_complete());

        assert!(Fan::trivial(0).is_complete());
        assert!(!Fan::trivial(2).is_complete());
    }

    #[test]
    fn gorenstein_check_p2() {
        let fan = p2_fan().gorenstein_check().unwrap();
        // Every maximal form takes value one on the rays of its cone.
        for &id in fan.maximal_ids() {
            let form = fan.k_form(id).unwrap();
            for r in fan.cone(id).unwrap().rays() {
                assert_eq!(form.eval(r), BigRational::from(BigInt::one()));
            }
        }
    }

    #[test]
    fn gorenstein_check_cube_fan_is_max_coordinate() {
        let fan = cube_face_fan().gorenstein_check().unwrap();
        // K is the max-coordinate function: level of (2,1,0) is 2.
        assert_eq!(fan.k_value(&v(&[2, 1, 0])), Some(BigInt::from(2)));
        assert_eq!(fan.k_value(&v(&[0, 0, 0])), Some(BigInt::zero()));
        assert_eq!(fan.k_value(&v(&[-3, 1, 1])), Some(BigInt::from(3)));
    }

    #[test]
    fn gorenstein_check_rejects_non_integral_cone() {
        let fan = Fan::from_max_cones(
            3,
            &[vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 2])]],
        )
        .unwrap();
        match fan.gorenstein_check() {
            Err(Error::NotGorenstein { source }) => {
                assert!(matches!(*source, Error::NonIntegral { .. }));
            }
            other => panic!("expected NotGorenstein, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn star_examples() {
        let fan = cube_face_fan();
        // Star of a maximal cone is a single element.
        let max0 = fan.maximal_ids()[0];
        assert_eq!(fan.star(max0).unwrap(), vec![max0]);
        // Star of an edge cone: the edge and two squares.
        let edge_id = (0..fan.len())
            .find(|&id| {
                let c = fan.cone(id).unwrap();
                c.dim() == 2
                    && c.rays().contains(&v(&[1, 1, 1]))
                    && c.rays().contains(&v(&[1, 1, -1]))
            })
            .unwrap();
        let star = fan.star(edge_id).unwrap();
        assert_eq!(star.len(), 3);
        assert_eq!(fan.cone(star[0]).unwrap().dim(), 2);
        assert_eq!(fan.cone(star[1]).unwrap().dim(), 3);
        assert_eq!(fan.cone(star[2]).unwrap().dim(), 3);
        // Star of the zero cone is the whole fan.
        assert_eq!(fan.star(fan.zero_cone_id()).unwrap().len(), fan.len());
        assert!(matches!(fan.star(999), Err(Error::UnknownCone { .. })));
    }

    #[test]
    fn interval_examples() {
        let fan = cube_face_fan();
        let max0 = fan.maximal_ids()[0];
        // [sigma, sigma] is a point.
        assert_eq!(fan.interval(max0, max0).unwrap().len(), 1);
        // [0, square cone] is the 10-element face lattice of the square
        // cone.
        let iv = fan.interval(fan.zero_cone_id(), max0).unwrap();
        assert_eq!(iv.len(), 10);
        assert_eq!(iv.top_rank(), 3);
        // Incomparable cones.
        let (a, b) = (fan.maximal_ids()[0], fan.maximal_ids()[1]);
        assert!(matches!(
            fan.interval(a, b),
            Err(Error::NotComparable { .. })
        ));
    }

    #[test]
    fn interval_from_zero_matches_face_lattice() {
        let fan = cube_face_fan();
        for &id in fan.maximal_ids() {
            let iv = fan.interval(fan.zero_cone_id(), id).unwrap();
            let fl = fan.cone(id).unwrap().face_lattice().unwrap();
            let lattice_poset = fl.poset().unwrap();
            assert_eq!(iv.certificate(), lattice_poset.certificate());
        }
    }

    #[test]
    fn face_closure_is_idempotent() {
        let fan = p2_fan();
        let rebuilt = Fan::from_max_cones(
            2,
            &fan
                .maximal_ids()
                .iter()
                .map(|&id| fan.cone(id).unwrap().rays().to_vec())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(rebuilt.len(), fan.len());
        for (a, b) in fan.cones().iter().zip(rebuilt.cones().iter()) {
            assert_eq!(a.rays(), b.rays());
        }
    }
}
