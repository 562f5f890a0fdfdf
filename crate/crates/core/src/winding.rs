//! Rigorous winding numbers, branch-and-prune zero isolation, and certified
//! verification of sign constraints along polyline paths.

use crate::charfn::TrigPolynomial;
use crate::interval::{
    certify_sign_multi, enclose, Box2, Component, ComplexBox, Direction, Interval, Region,
    Segment, SignCertificate,
};
use crate::miranda::poly_fingerprint;
use crate::{Error, Verdict};

/// Default cap on surviving boxes in [`zero_search`]; a polynomial whose zero
/// set is a curve would otherwise subdivide forever.
pub const DEFAULT_BOX_CAP: usize = 100_000;

/// Polyline in `R²`, optionally closed (traversed back to the first vertex).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath {
    vertices: Vec<[f64; 2]>,
    closed: bool,
}

impl PolyPath {
    pub fn new(vertices: Vec<[f64; 2]>, closed: bool) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("need at least 2 vertices"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPath("non-finite vertex"));
        }
        let n = vertices.len();
        let pairs = if closed { n } else { n - 1 };
        for i in 0..pairs {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a == b {
                return Err(Error::InvalidPath("consecutive vertices coincide"));
            }
        }
        Ok(Self { vertices, closed })
    }

    /// Counterclockwise rectangle boundary, starting at the lower-left corner.
    pub fn rectangle(b: &Box2) -> Self {
        Self::new(
            vec![
                [b.x.lo(), b.y.lo()],
                [b.x.hi(), b.y.lo()],
                [b.x.hi(), b.y.hi()],
                [b.x.lo(), b.y.hi()],
            ],
            true,
        )
        .expect("rectangle boundary is a valid path")
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn num_edges(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Edges as segments, including the closing edge for closed paths. The
    /// path parameter `t ∈ [0,1]` is uniform over edges: edge `i` covers
    /// `[i/n, (i+1)/n]`.
    pub fn segments(&self) -> Vec<Segment> {
        let n = self.vertices.len();
        (0..self.num_edges())
            .map(|i| Segment::from_points(self.vertices[i], self.vertices[(i + 1) % n]))
            .collect()
    }

    /// Point at global parameter `t ∈ [0,1]` (double precision, for tests
    /// and sampling).
    pub fn point_at(&self, t: f64) -> [f64; 2] {
        let n = self.num_edges() as f64;
        let scaled = (t.clamp(0.0, 1.0) * n).min(n - f64::EPSILON);
        let i = scaled.floor() as usize;
        let local = scaled - i as f64;
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % self.vertices.len()];
        [a[0] + local * (b[0] - a[0]), a[1] + local * (b[1] - a[1])]
    }
}

/// Branch-and-prune zero isolation with the default surviving-box cap.
///
/// Discards any sub-box whose enclosure excludes 0 and bisects the rest until
/// the diameter drops below `tol`; surviving boxes are merged into connected
/// clusters (face or corner contact) and reported as cluster bounding boxes,
/// sorted by center. Exclusion is sound — no zero is ever discarded — but
/// survivors are not guaranteed to contain zeros.
pub fn zero_search(poly: &TrigPolynomial, boxx: &Box2, tol: f64) -> Result<Vec<Box2>, Error> {
    zero_search_with_cap(poly, boxx, tol, DEFAULT_BOX_CAP)
}

pub fn zero_search_with_cap(
    poly: &TrigPolynomial,
    boxx: &Box2,
    tol: f64,
    cap: usize,
) -> Result<Vec<Box2>, Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInterval(tol, tol));
    }
    let mut stack = vec![*boxx];
    let mut survivors: Vec<Box2> = Vec::new();
    while let Some(b) = stack.pop() {
        let e = enclose(poly, &Region::Rect(b))?;
        if !e.contains_zero() {
            continue;
        }
        if b.diameter() < tol {
            survivors.push(b);
            if survivors.len() > cap {
                return Err(Error::BudgetExceeded(cap));
            }
            continue;
        }
        let (l, r) = b.split();
        stack.push(r);
        stack.push(l);
    }
    Ok(cluster(survivors))
}

/// Union-find merge of boxes that share a face or corner; each cluster is
/// reported by its bounding box.
fn cluster(boxes: Vec<Box2>) -> Vec<Box2> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if boxes[i].touches(&boxes[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut hulls: std::collections::BTreeMap<usize, Box2> = Default::default();
    for (i, b) in boxes.iter().enumerate() {
        let root = find(&mut parent, i);
        hulls.entry(root).and_modify(|h| *h = h.hull(b)).or_insert(*b);
    }
    let mut out: Vec<Box2> = hulls.into_values().collect();
    out.sort_by(|a, b| {
        let ca = a.center();
        let cb = b.center();
        ca[0].partial_cmp(&cb[0]).unwrap().then(ca[1].partial_cmp(&cb[1]).unwrap())
    });
    out
}

/// One certified arc of a winding computation: the image enclosure excludes 0
/// and spans less than a quarter turn around its half-plane witness.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcWitness {
    pub segment_index: usize,
    pub t: Interval,
    pub enclosure: ComplexBox,
    pub witness_angle: f64,
    pub abs_lower: f64,
}

/// Certified winding number of the polynomial along a closed path, with a
/// positive lower bound for `|poly|` on the path. A nonzero winding proves an
/// interior zero robust up to perturbations below `modulus_floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingCertificate {
    pub path: PolyPath,
    pub winding: i64,
    pub modulus_floor: f64,
    pub arcs: Vec<ArcWitness>,
    pub poly_fingerprint: String,
}

/// Witness angle and angular extent of a box that excludes the origin.
///
/// A convex set not containing 0 lies in an open half-plane, so corner angles
/// relative to the center angle never wrap; the extreme arguments over the
/// box are attained at corners.
pub(crate) fn sector(b: &ComplexBox) -> Option<(f64, f64)> {
    if b.contains_zero() {
        return None;
    }
    let center = f64::atan2(b.im.mid(), b.re.mid());
    let corners = [
        (b.re.lo(), b.im.lo()),
        (b.re.hi(), b.im.lo()),
        (b.re.hi(), b.im.hi()),
        (b.re.lo(), b.im.hi()),
    ];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (re, im) in corners {
        let mut d = f64::atan2(im, re) - center;
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        } else if d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Some((center + 0.5 * (lo + hi), hi - lo))
}

fn normalize_angle(mut d: f64) -> f64 {
    while d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    }
    while d < -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    d
}

/// Rigorous winding number along a closed path.
///
/// Each edge's parameter is subdivided until the arc's image enclosure
/// excludes 0 and has angular extent below π/2; consecutive arcs share an
/// endpoint, so their enclosures intersect and every witness-angle increment
/// lies in (−π/2, π/2), which pins the branch of the argument. The increments
/// telescope to 2π times the winding number.
pub fn winding_number(
    poly: &TrigPolynomial,
    path: &PolyPath,
    max_depth: usize,
) -> Result<Verdict<WindingCertificate>, Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    if !path.is_closed() {
        return Err(Error::InvalidPath("winding requires a closed path"));
    }
    let mut arcs: Vec<ArcWitness> = Vec::new();
    for (i, seg) in path.segments().iter().enumerate() {
        if !refine_arc(poly, i, seg, Interval::new(0.0, 1.0).unwrap(), max_depth, &mut arcs)? {
            return Ok(Verdict::Inconclusive);
        }
    }
    let mut total = 0.0;
    let mut floor = f64::INFINITY;
    for (k, arc) in arcs.iter().enumerate() {
        let next = &arcs[(k + 1) % arcs.len()];
        total += normalize_angle(next.witness_angle - arc.witness_angle);
        floor = floor.min(arc.abs_lower);
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let winding = turns.round();
    if (turns - winding).abs() > 1e-6 {
        return Ok(Verdict::Inconclusive);
    }
    Ok(Verdict::Certified(WindingCertificate {
        path: path.clone(),
        winding: winding as i64,
        modulus_floor: floor,
        arcs,
        poly_fingerprint: poly_fingerprint(poly),
    }))
}

fn refine_arc(
    poly: &TrigPolynomial,
    index: usize,
    seg: &Segment,
    t: Interval,
    depth_left: usize,
    arcs: &mut Vec<ArcWitness>,
) -> Result<bool, Error> {
    let e = enclose(poly, &Region::Arc { seg: *seg, t })?;
    if let Some((witness, extent)) = sector(&e) {
        if extent < std::f64::consts::FRAC_PI_2 {
            arcs.push(ArcWitness {
                segment_index: index,
                t,
                enclosure: e,
                witness_angle: witness,
                abs_lower: e.abs_lower(),
            });
            return Ok(true);
        }
    }
    if depth_left == 0 {
        return Ok(false);
    }
    let m = t.mid();
    Ok(
        refine_arc(poly, index, seg, Interval::new(t.lo(), m)?, depth_left - 1, arcs)?
            && refine_arc(poly, index, seg, Interval::new(m, t.hi())?, depth_left - 1, arcs)?,
    )
}

/// A directed sign requirement on a sub-range of a path's parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConstraint {
    pub range: Interval,
    pub target: Component,
    pub threshold: f64,
    pub direction: Direction,
}

/// Result of [`verify_path_constraints`]: all certificates, or the index of
/// the first constraint that could not be certified at the depth budget.
#[derive(Debug, Clone, PartialEq)]
pub enum PathVerification {
    Certified(Vec<SignCertificate>),
    Inconclusive { failing_constraint: usize },
}

impl PathVerification {
    pub fn certificates(self) -> Option<Vec<SignCertificate>> {
        match self {
            PathVerification::Certified(c) => Some(c),
            PathVerification::Inconclusive { .. } => None,
        }
    }
}

/// Certifies each constraint along the path via sign certification over the
/// constrained sub-paths. The constraint ranges must cover `[0, 1]`.
pub fn verify_path_constraints(
    poly: &TrigPolynomial,
    path: &PolyPath,
    constraints: &[PathConstraint],
    max_depth: usize,
) -> Result<PathVerification, Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    check_cover(constraints)?;
    let segments = path.segments();
    let n = segments.len() as f64;
    let mut certs = Vec::with_capacity(constraints.len());
    for (ci, c) in constraints.iter().enumerate() {
        let mut regions = Vec::new();
        for (i, seg) in segments.iter().enumerate() {
            let span_lo = i as f64 / n;
            let span_hi = (i as f64 + 1.0) / n;
            let lo = c.range.lo().max(span_lo);
            let hi = c.range.hi().min(span_hi);
            if hi < lo || (hi == lo && c.range.width() > 0.0) {
                continue;
            }
            let t = Interval::new(
                ((lo - span_lo) * n).clamp(0.0, 1.0),
                ((hi - span_lo) * n).clamp(0.0, 1.0),
            )?;
            regions.push(Region::Arc { seg: *seg, t });
        }
        match certify_sign_multi(poly, c.target, regions, c.threshold, c.direction, max_depth)? {
            Verdict::Certified(cert) => certs.push(cert),
            Verdict::Inconclusive => {
                return Ok(PathVerification::Inconclusive { failing_constraint: ci })
            }
        }
    }
    Ok(PathVerification::Certified(certs))
}

fn check_cover(constraints: &[PathConstraint]) -> Result<(), Error> {
    let mut ranges: Vec<(f64, f64)> = constraints
        .iter()
        .map(|c| (c.range.lo(), c.range.hi()))
        .collect();
    if ranges.iter().any(|&(a, b)| a < 0.0 || b > 1.0) {
        return Err(Error::InvalidConstraintCover);
    }
    ranges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut covered = 0.0;
    for (a, b) in ranges {
        if a > covered {
            return Err(Error::InvalidConstraintCover);
        }
        covered = covered.max(b);
    }
    if covered < 1.0 {
        return Err(Error::InvalidConstraintCover);
    }
    Ok(())
}

/// The L-shaped path down the y-axis and then right along the bottom edge of
/// `[−π, π]²`: vertices `(0,0) → (0,−π) → (π,−π)`.
pub fn path_down_then_right() -> PolyPath {
    let pi = std::f64::consts::PI;
    PolyPath::new(vec![[0.0, 0.0], [0.0, -pi], [pi, -pi]], false).unwrap()
}

/// The mirrored path right along the x-axis and then down the right edge:
/// vertices `(0,0) → (π,0) → (π,−π)`.
pub fn path_right_then_down() -> PolyPath {
    let pi = std::f64::consts::PI;
    PolyPath::new(vec![[0.0, 0.0], [pi, 0.0], [pi, -pi]], false).unwrap()
}

/// Segment sign bounds for [`path_down_then_right`] at threshold 1/10:
/// Re ≥ 1/10 on t ∈ [0, 1/4], Im ≤ −1/10 on [1/4, 3/8], Re ≤ −1/10 on
/// [3/8, 1].
pub fn constraints_down_then_right() -> Vec<PathConstraint> {
    vec![
        PathConstraint {
            range: Interval::new(0.0, 0.25).unwrap(),
            target: Component::Re,
            threshold: 0.1,
            direction: Direction::Geq,
        },
        PathConstraint {
            range: Interval::new(0.25, 0.375).unwrap(),
            target: Component::Im,
            threshold: -0.1,
            direction: Direction::Leq,
        },
        PathConstraint {
            range: Interval::new(0.375, 1.0).unwrap(),
            target: Component::Re,
            threshold: -0.1,
            direction: Direction::Leq,
        },
    ]
}

/// Segment sign bounds for [`path_right_then_down`], with the positive
/// imaginary bound on the middle stretch.
pub fn constraints_right_then_down() -> Vec<PathConstraint> {
    vec![
        PathConstraint {
            range: Interval::new(0.0, 0.25).unwrap(),
            target: Component::Re,
            threshold: 0.1,
            direction: Direction::Geq,
        },
        PathConstraint {
            range: Interval::new(0.25, 0.375).unwrap(),
            target: Component::Im,
            threshold: 0.1,
            direction: Direction::Geq,
        },
        PathConstraint {
            range: Interval::new(0.375, 1.0).unwrap(),
            target: Component::Re,
            threshold: -0.1,
            direction: Direction::Leq,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::DiscreteDistribution;

    const PI: f64 = std::f64::consts::PI;

    fn phi() -> TrigPolynomial {
        DiscreteDistribution::builtin_mu().char_poly()
    }

    fn zero() -> [f64; 2] {
        [2.0 * PI / 3.0, -2.0 * PI / 3.0]
    }

    #[test]
    fn path_validation() {
        assert!(matches!(
            PolyPath::new(vec![[0.0, 0.0]], false),
            Err(Error::InvalidPath(_))
        ));
        assert!(matches!(
            PolyPath::new(vec![[0.0, 0.0], [0.0, 0.0]], false),
            Err(Error::InvalidPath(_))
        ));
        // Closed paths must not repeat the first vertex explicitly.
        assert!(matches!(
            PolyPath::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]], true),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn zero_search_finds_both_zeros() {
        let b = Box2::new(-PI, PI, -PI, PI).unwrap();
        let clusters = zero_search(&phi(), &b, 1e-6).unwrap();
        assert_eq!(clusters.len(), 2);
        let z = zero();
        let c0 = clusters[0].center();
        let c1 = clusters[1].center();
        assert!((c0[0] + z[0]).abs() < 1e-6 && (c0[1] - z[1].abs()).abs() < 1e-6);
        assert!((c1[0] - z[0]).abs() < 1e-6 && (c1[1] - z[1]).abs() < 1e-6);
    }

    #[test]
    fn zero_search_on_constant_is_empty() {
        let one = TrigPolynomial::constant(2, 1.0);
        let b = Box2::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!(zero_search(&one, &b, 1e-3).unwrap().is_empty());
    }

    #[test]
    fn zero_search_respects_modulus_bound() {
        let b = Box2::new(-0.5, 0.5, -0.5, 0.5).unwrap();
        assert!(zero_search(&phi(), &b, 1e-4).unwrap().is_empty());
    }

    #[test]
    fn zero_search_budget_is_enforced() {
        // The constant-zero polynomial survives everywhere.
        let z = TrigPolynomial::constant(2, 0.0);
        let b = Box2::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let e = zero_search_with_cap(&z, &b, 1e-3, 100);
        assert!(matches!(e, Err(Error::BudgetExceeded(100))));
    }

    #[test]
    fn winding_around_the_zero_is_minus_one() {
        let z = zero();
        let b = Box2::new(z[0] - 0.1, z[0] + 0.1, z[1] - 0.1, z[1] + 0.1).unwrap();
        let c = winding_number(&phi(), &PolyPath::rectangle(&b), 16)
            .unwrap()
            .certified()
            .unwrap();
        assert_eq!(c.winding, -1);
        assert!(c.modulus_floor > 0.0);
    }

    #[test]
    fn winding_on_zero_free_box_is_zero() {
        let b = Box2::new(-0.5, 0.5, -0.5, 0.5).unwrap();
        let c = winding_number(&phi(), &PolyPath::rectangle(&b), 16)
            .unwrap()
            .certified()
            .unwrap();
        assert_eq!(c.winding, 0);
        assert!(c.modulus_floor >= 0.5);
    }

    #[test]
    fn winding_of_constant_one() {
        let b = Box2::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let one = TrigPolynomial::constant(2, 1.0);
        let c = winding_number(&one, &PolyPath::rectangle(&b), 4)
            .unwrap()
            .certified()
            .unwrap();
        assert_eq!(c.winding, 0);
        assert!(c.modulus_floor >= 1.0 - 1e-12);
    }

    #[test]
    fn winding_requires_closed_path() {
        let e = winding_number(&phi(), &path_down_then_right(), 8);
        assert!(matches!(e, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn nested_squares_agree_on_the_winding() {
        let z = zero();
        let mut got = Vec::new();
        for side in [0.4, 0.2, 0.1] {
            let h = side / 2.0;
            let b = Box2::new(z[0] - h, z[0] + h, z[1] - h, z[1] + h).unwrap();
            let c = winding_number(&phi(), &PolyPath::rectangle(&b), 16)
                .unwrap()
                .certified()
                .unwrap();
            got.push(c.winding);
        }
        assert_eq!(got, vec![got[0]; 3]);
    }

    #[test]
    fn winding_is_additive_over_subboxes() {
        let outer = Box2::new(-PI + 0.05, PI - 0.05, -PI + 0.05, PI - 0.05).unwrap();
        let z = zero();
        let b1 = Box2::new(z[0] - 0.2, z[0] + 0.2, z[1] - 0.2, z[1] + 0.2).unwrap();
        let b2 = Box2::new(-z[0] - 0.2, -z[0] + 0.2, -z[1] - 0.2, -z[1] + 0.2).unwrap();
        let w = |b: &Box2| {
            winding_number(&phi(), &PolyPath::rectangle(b), 18)
                .unwrap()
                .certified()
                .unwrap()
                .winding
        };
        assert_eq!(w(&outer), w(&b1) + w(&b2));
    }

    #[test]
    fn path_formulas_match_closed_forms() {
        // On the vertical stretch of the first path the components reduce to
        // 2/3·cos(2πt) + 1/3 and −2/3·sin(2πt).
        let p = phi();
        let path = path_down_then_right();
        for k in 0..=1000 {
            let t = 0.5 * k as f64 / 1000.0;
            let v = p.eval(&path.point_at(t)).unwrap();
            assert!((v.re - (2.0 / 3.0 * (2.0 * PI * t).cos() + 1.0 / 3.0)).abs() < 1e-12);
            assert!((v.im - (-2.0 / 3.0 * (2.0 * PI * t).sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn both_paths_verify_their_constraints() {
        let p = phi();
        let v = verify_path_constraints(&p, &path_down_then_right(), &constraints_down_then_right(), 12)
            .unwrap();
        assert_eq!(v.certificates().unwrap().len(), 3);
        let v = verify_path_constraints(&p, &path_right_then_down(), &constraints_right_then_down(), 12)
            .unwrap();
        assert_eq!(v.certificates().unwrap().len(), 3);
    }

    #[test]
    fn constant_polynomial_verifies_a_trivial_constraint() {
        let one = TrigPolynomial::constant(2, 1.0);
        let c = PathConstraint {
            range: Interval::new(0.0, 1.0).unwrap(),
            target: Component::Re,
            threshold: 0.1,
            direction: Direction::Geq,
        };
        let v = verify_path_constraints(&one, &path_down_then_right(), &[c], 0).unwrap();
        assert_eq!(v.certificates().unwrap().len(), 1);
    }

    #[test]
    fn gaps_in_the_cover_are_rejected() {
        let c = PathConstraint {
            range: Interval::new(0.0, 0.5).unwrap(),
            target: Component::Re,
            threshold: 0.1,
            direction: Direction::Geq,
        };
        let e = verify_path_constraints(&phi(), &path_down_then_right(), &[c], 4);
        assert!(matches!(e, Err(Error::InvalidConstraintCover)));
    }

    #[test]
    fn failing_constraint_is_identified() {
        // Re ≥ 0.9 fails on the later stretch where Re φ = −1/3.
        let cs = vec![
            PathConstraint {
                range: Interval::new(0.0, 0.1).unwrap(),
                target: Component::Re,
                threshold: 0.1,
                direction: Direction::Geq,
            },
            PathConstraint {
                range: Interval::new(0.1, 1.0).unwrap(),
                target: Component::Re,
                threshold: 0.9,
                direction: Direction::Geq,
            },
        ];
        let v = verify_path_constraints(&phi(), &path_down_then_right(), &cs, 6).unwrap();
        assert_eq!(v, PathVerification::Inconclusive { failing_constraint: 1 });
    }
}
