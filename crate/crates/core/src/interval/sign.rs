//! Certified range enclosure and adaptive sign certification.

use std::collections::BinaryHeap;

use super::{Box2, ComplexBox, Interval, Region};
use crate::charfn::TrigPolynomial;
use crate::{Error, Verdict};

/// Component selector for sign certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
}

/// Direction of a certified strict inequality against a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Geq,
    Leq,
}

fn check_dim2(poly: &TrigPolynomial) -> Result<(), Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    Ok(())
}

/// Rigorous enclosure of the polynomial's range over a region.
///
/// Per term: the interval inner product of the region coordinates with the
/// frequency, then `w·(range_cos + i·range_sin)` with the weight widened by
/// one ulp, accumulated with outward rounding in term order (the same
/// association order as [`TrigPolynomial::eval`], so rounded point
/// evaluations stay inside the enclosure).
pub fn enclose(poly: &TrigPolynomial, region: &Region) -> Result<ComplexBox, Error> {
    check_dim2(poly)?;
    let (cx, cy) = region.coords();
    let mut re = Interval::point(0.0);
    let mut im = Interval::point(0.0);
    for term in poly.terms() {
        let theta = cx
            .mul(&Interval::point(term.frequency[0]))
            .add(&cy.mul(&Interval::point(term.frequency[1])));
        let w = Interval::widened(term.weight);
        re = re.add(&w.mul(&theta.range_cos()));
        im = im.add(&w.mul(&theta.range_sin()));
    }
    Ok(ComplexBox { re, im })
}

fn component(b: &ComplexBox, c: Component) -> Interval {
    match c {
        Component::Re => b.re,
        Component::Im => b.im,
    }
}

fn satisfies(bound: &Interval, threshold: f64, dir: Direction) -> bool {
    // Strict: an enclosure exactly touching the threshold never certifies.
    match dir {
        Direction::Geq => bound.lo() > threshold,
        Direction::Leq => bound.hi() < threshold,
    }
}

/// One certified leaf: a subregion together with the enclosure of the target
/// component over it.
#[derive(Debug, Clone, PartialEq)]
pub struct SignLeaf {
    pub region: Region,
    pub bound: Interval,
}

/// Evidence that a component of the polynomial satisfies a strict directed
/// inequality everywhere on the stated regions: the leaves tile the regions
/// and every leaf's enclosure satisfies the inequality strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct SignCertificate {
    pub target: Component,
    pub threshold: f64,
    pub direction: Direction,
    pub regions: Vec<Region>,
    pub leaves: Vec<SignLeaf>,
    pub depth_used: usize,
}

/// Adaptive bisection sign certification over a single region.
///
/// If the region's enclosure satisfies the strict inequality, it becomes a
/// leaf; otherwise the region is split (longest axis at the midpoint, ties
/// split x; arcs split the parameter) and both halves are certified
/// recursively. Leaf order is deterministic depth-first.
pub fn certify_sign(
    poly: &TrigPolynomial,
    target: Component,
    region: Region,
    threshold: f64,
    direction: Direction,
    max_depth: usize,
) -> Result<Verdict<SignCertificate>, Error> {
    certify_sign_multi(poly, target, vec![region], threshold, direction, max_depth)
}

/// Like [`certify_sign`] but the certificate covers several root regions
/// (e.g. one path constraint spanning multiple polyline segments).
pub fn certify_sign_multi(
    poly: &TrigPolynomial,
    target: Component,
    regions: Vec<Region>,
    threshold: f64,
    direction: Direction,
    max_depth: usize,
) -> Result<Verdict<SignCertificate>, Error> {
    check_dim2(poly)?;
    if !threshold.is_finite() {
        return Err(Error::InvalidInterval(threshold, threshold));
    }
    let mut leaves = Vec::new();
    let mut depth_used = 0usize;
    for region in &regions {
        if !descend(
            poly, target, *region, threshold, direction, max_depth, 0, &mut leaves,
            &mut depth_used,
        )? {
            return Ok(Verdict::Inconclusive);
        }
    }
    Ok(Verdict::Certified(SignCertificate {
        target,
        threshold,
        direction,
        regions,
        leaves,
        depth_used,
    }))
}

#[allow(clippy::too_many_arguments)]
fn descend(
    poly: &TrigPolynomial,
    target: Component,
    region: Region,
    threshold: f64,
    direction: Direction,
    max_depth: usize,
    depth: usize,
    leaves: &mut Vec<SignLeaf>,
    depth_used: &mut usize,
) -> Result<bool, Error> {
    let bound = component(&enclose(poly, &region)?, target);
    if satisfies(&bound, threshold, direction) {
        *depth_used = (*depth_used).max(depth);
        leaves.push(SignLeaf { region, bound });
        return Ok(true);
    }
    if depth >= max_depth {
        return Ok(false);
    }
    let (a, b) = region.split();
    Ok(descend(poly, target, a, threshold, direction, max_depth, depth + 1, leaves, depth_used)?
        && descend(poly, target, b, threshold, direction, max_depth, depth + 1, leaves, depth_used)?)
}

struct HeapLeaf {
    bound: f64,
    depth: usize,
    seq: u64,
    rect: Box2,
}

// Min-heap on bound, with the insertion sequence as a deterministic
// tie-breaker.
impl PartialEq for HeapLeaf {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for HeapLeaf {}
impl Ord for HeapLeaf {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap()
            .then(other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for HeapLeaf {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Certified lower bound for `|poly|` on a box.
///
/// Best-first refinement: the leaf with the smallest certified lower bound is
/// split until it reaches `max_depth` (further splitting cannot raise the
/// minimum once the weakest leaf is final). Returns 0 when some leaf's
/// enclosure still contains 0 at full depth. Sound: `|poly(t)| ≥` the
/// returned value for every `t` in the box.
pub fn modulus_lower_bound(
    poly: &TrigPolynomial,
    boxx: &Box2,
    max_depth: usize,
) -> Result<f64, Error> {
    check_dim2(poly)?;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let push = |heap: &mut BinaryHeap<HeapLeaf>, rect: Box2, depth: usize, seq: &mut u64| {
        let b = enclose(poly, &Region::Rect(rect)).map(|e| e.abs_lower())?;
        heap.push(HeapLeaf { bound: b, depth, seq: *seq, rect });
        *seq += 1;
        Ok::<(), Error>(())
    };
    push(&mut heap, *boxx, 0, &mut seq)?;
    let mut pops = 0usize;
    while let Some(top) = heap.pop() {
        if top.depth >= max_depth {
            return Ok(top.bound);
        }
        pops += 1;
        if pops > 200_000 {
            // Refinement budget exhausted; the current minimum is still sound.
            return Ok(top.bound);
        }
        let (a, b) = top.rect.split();
        push(&mut heap, a, top.depth + 1, &mut seq)?;
        push(&mut heap, b, top.depth + 1, &mut seq)?;
    }
    unreachable!("heap never empties before hitting max depth");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::DiscreteDistribution;
    use crate::interval::Segment;

    fn phi() -> TrigPolynomial {
        DiscreteDistribution::builtin_mu().char_poly()
    }

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn point_box_enclosure_of_origin_is_tight_around_one() {
        let b = Box2::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let e = enclose(&phi(), &Region::Rect(b)).unwrap();
        assert!(e.contains(num_complex::Complex64::new(1.0, 0.0)));
        assert!(e.re.width() < 1e-14);
        assert!(e.im.width() < 1e-14);
    }

    #[test]
    fn boundary_segment_encloses_minus_one_third() {
        // {π}×[−π,π]: the real part is constantly −1/3 there.
        let b = Box2::new(PI, PI, -PI, PI).unwrap();
        let e = enclose(&phi(), &Region::Rect(b)).unwrap();
        assert!(e.re.contains(-1.0 / 3.0));
    }

    #[test]
    fn small_box_width_obeys_lipschitz_bound() {
        let b = Box2::new(-0.01, 0.01, -0.01, 0.01).unwrap();
        let e = enclose(&phi(), &Region::Rect(b)).unwrap();
        assert!(e.contains(num_complex::Complex64::new(1.0, 0.0)));
        let lipschitz = (1.0 + 1.0 + 2f64.sqrt()) / 3.0;
        let budget = 2.0 * lipschitz * b.diameter() + 1e-9;
        assert!(e.re.width() <= budget, "re width {}", e.re.width());
        assert!(e.im.width() <= budget, "im width {}", e.im.width());
    }

    #[test]
    fn certify_sign_on_boundary_segment() {
        let seg = Segment::from_points([PI, -PI], [PI, PI]);
        let v = certify_sign(
            &phi(),
            Component::Re,
            Region::segment(seg),
            -0.1,
            Direction::Leq,
            8,
        )
        .unwrap();
        let cert = v.certified().expect("certificate");
        for leaf in &cert.leaves {
            assert!(leaf.bound.hi() < -0.1);
        }
    }

    #[test]
    fn certify_sign_single_point_region() {
        let b = Box2::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let v = certify_sign(&phi(), Component::Re, Region::Rect(b), 0.1, Direction::Geq, 0)
            .unwrap();
        assert!(v.is_certified());
    }

    #[test]
    fn certify_sign_exhausts_depth_on_false_claim() {
        // Re φ reaches 1 at the origin, so Re ≤ −0.1 on a box containing it
        // is false and must come back inconclusive rather than error.
        let b = Box2::new(-0.1, 0.1, -0.1, 0.1).unwrap();
        let v = certify_sign(&phi(), Component::Re, Region::Rect(b), -0.1, Direction::Leq, 6)
            .unwrap();
        assert_eq!(v, Verdict::Inconclusive);
    }

    #[test]
    fn certify_sign_rejects_wrong_dimension() {
        let one = TrigPolynomial::constant(1, 1.0);
        let b = Box2::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let e = certify_sign(&one, Component::Re, Region::Rect(b), 0.0, Direction::Geq, 2);
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn modulus_floor_of_constant_one() {
        let one = TrigPolynomial::constant(2, 1.0);
        let b = Box2::new(-3.0, 3.0, -3.0, 3.0).unwrap();
        let m = modulus_lower_bound(&one, &b, 4).unwrap();
        assert!(m >= 1.0 - 1e-12);
    }

    #[test]
    fn modulus_floor_on_zero_free_box() {
        let b = Box2::new(-0.5, 0.5, -0.5, 0.5).unwrap();
        let m = modulus_lower_bound(&phi(), &b, 10).unwrap();
        assert!(m >= 0.5, "floor {m}");
    }

    #[test]
    fn modulus_floor_is_zero_when_box_has_zeros() {
        let b = Box2::new(-PI, PI, -PI, PI).unwrap();
        let m = modulus_lower_bound(&phi(), &b, 12).unwrap();
        assert_eq!(m, 0.0);
    }
}
