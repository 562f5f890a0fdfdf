//! Poincaré–Miranda certification on affine-mapped squares.
//!
//! A [`MirandaCertificate`] proves the robust-zero property: every continuous
//! function whose sup-distance from the polynomial on the mapped square is
//! less than the margin has a zero inside the square. The proof obligation is
//! four strict sign certificates on the square's edges, one per component and
//! edge pair, in one of the four valid Miranda orientations.

use crate::charfn::TrigPolynomial;
use crate::interval::{
    certify_sign, Component, Direction, Interval, Region, Segment, SignCertificate,
};
use crate::{Error, Verdict};

/// Affine map `(x,y) ↦ base + x·u + y·v` from `[0,1]²` into `R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSquareMap {
    base: [f64; 2],
    u: [f64; 2],
    v: [f64; 2],
}

/// Which edge of the unit square, named by the frozen coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Y0,
    Y1,
    X0,
    X1,
}

pub const EDGES: [Edge; 4] = [Edge::Y0, Edge::Y1, Edge::X0, Edge::X1];

impl AffineSquareMap {
    pub fn new(base: [f64; 2], u: [f64; 2], v: [f64; 2]) -> Result<Self, Error> {
        for c in base.iter().chain(&u).chain(&v) {
            if !c.is_finite() {
                return Err(Error::DegenerateMap);
            }
        }
        let det = u[0] * v[1] - u[1] * v[0];
        if det.abs() <= 1e-12 {
            return Err(Error::DegenerateMap);
        }
        Ok(Self { base, u, v })
    }

    /// The map `ψ` with base `(5π/8, −7π/8)`, `u = (π/4, π/4)`,
    /// `v = (−π/2, π/2)`; the CLI's `paper-psi`.
    pub fn builtin_psi() -> Self {
        use std::f64::consts::PI;
        Self::new(
            [5.0 * PI / 8.0, -7.0 * PI / 8.0],
            [PI / 4.0, PI / 4.0],
            [-PI / 2.0, PI / 2.0],
        )
        .expect("builtin map is nondegenerate")
    }

    pub fn base(&self) -> [f64; 2] {
        self.base
    }

    pub fn u(&self) -> [f64; 2] {
        self.u
    }

    pub fn v(&self) -> [f64; 2] {
        self.v
    }

    pub fn apply(&self, x: f64, y: f64) -> [f64; 2] {
        [
            self.base[0] + x * self.u[0] + y * self.v[0],
            self.base[1] + x * self.u[1] + y * self.v[1],
        ]
    }

    /// Image corners in counterclockwise order when `det[u v] > 0`.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        [self.apply(0.0, 0.0), self.apply(1.0, 0.0), self.apply(1.0, 1.0), self.apply(0.0, 1.0)]
    }

    /// One edge of the image square as an interval-coefficient segment, so
    /// the segment covers the exact edge `{base + c·w + t·d}` without
    /// committing to a rounded endpoint.
    pub fn edge(&self, e: Edge) -> Segment {
        let p = |x: f64| Interval::point(x);
        let add = |a: [f64; 2], b: [f64; 2]| [p(a[0]).add(&p(b[0])), p(a[1]).add(&p(b[1]))];
        match e {
            Edge::Y0 => Segment { start: [p(self.base[0]), p(self.base[1])], dir: [p(self.u[0]), p(self.u[1])] },
            Edge::Y1 => Segment { start: add(self.base, self.v), dir: [p(self.u[0]), p(self.u[1])] },
            Edge::X0 => Segment { start: [p(self.base[0]), p(self.base[1])], dir: [p(self.v[0]), p(self.v[1])] },
            Edge::X1 => Segment { start: add(self.base, self.u), dir: [p(self.v[0]), p(self.v[1])] },
        }
    }

    /// Interval enclosure of the whole image `ψ([0,1]²)`.
    pub fn image_hull(&self) -> (Interval, Interval) {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let p = |x: f64| Interval::point(x);
        (
            p(self.base[0]).add(&unit.mul(&p(self.u[0]))).add(&unit.mul(&p(self.v[0]))),
            p(self.base[1]).add(&unit.mul(&p(self.u[1]))).add(&unit.mul(&p(self.v[1]))),
        )
    }
}

/// The four valid Miranda sign patterns: the paper orientation, its sign
/// flip, and the two Re/Im-swapped variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Standard,
    Flipped,
    Swapped,
    SwappedFlipped,
}

pub const ORIENTATIONS: [Orientation; 4] = [
    Orientation::Standard,
    Orientation::Flipped,
    Orientation::Swapped,
    Orientation::SwappedFlipped,
];

impl Orientation {
    pub fn name(&self) -> &'static str {
        match self {
            Orientation::Standard => "standard",
            Orientation::Flipped => "flipped",
            Orientation::Swapped => "swapped",
            Orientation::SwappedFlipped => "swapped-flipped",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        ORIENTATIONS.iter().copied().find(|o| o.name() == s)
    }

    /// The (component, direction) required on each edge at a given margin.
    /// `Standard`: Re ≤ −m on y=0, Re ≥ m on y=1, Im ≤ −m on x=0,
    /// Im ≥ m on x=1.
    pub fn edge_condition(&self, e: Edge) -> (Component, Direction) {
        let (comp_y, comp_x) = match self {
            Orientation::Standard | Orientation::Flipped => (Component::Re, Component::Im),
            Orientation::Swapped | Orientation::SwappedFlipped => (Component::Im, Component::Re),
        };
        let flip = matches!(self, Orientation::Flipped | Orientation::SwappedFlipped);
        let (low_dir, high_dir) = if flip {
            (Direction::Geq, Direction::Leq)
        } else {
            (Direction::Leq, Direction::Geq)
        };
        match e {
            Edge::Y0 => (comp_y, low_dir),
            Edge::Y1 => (comp_y, high_dir),
            Edge::X0 => (comp_x, low_dir),
            Edge::X1 => (comp_x, high_dir),
        }
    }
}

/// Robust-zero certificate: four edge sign certificates at the margin in the
/// recorded orientation. Every continuous `g` with
/// `sup |g − poly| < margin` on the mapped square has a zero there.
#[derive(Debug, Clone, PartialEq)]
pub struct MirandaCertificate {
    pub map: AffineSquareMap,
    pub margin: f64,
    pub orientation: Orientation,
    pub edges: [SignCertificate; 4],
    pub poly_fingerprint: String,
}

/// FNV-1a hash of the term list, pinning which polynomial a certificate is
/// about.
pub fn poly_fingerprint(poly: &TrigPolynomial) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(poly.dim() as u64);
    for t in poly.terms() {
        eat(t.weight.to_bits());
        for &f in &t.frequency {
            eat(f.to_bits());
        }
    }
    format!("{h:016x}")
}

fn certify_edges(
    poly: &TrigPolynomial,
    map: &AffineSquareMap,
    orientation: Orientation,
    margin: f64,
    max_depth: usize,
) -> Result<Option<[SignCertificate; 4]>, Error> {
    let mut certs = Vec::with_capacity(4);
    for edge in EDGES {
        let (comp, dir) = orientation.edge_condition(edge);
        let threshold = match dir {
            Direction::Leq => -margin,
            Direction::Geq => margin,
        };
        match certify_sign(poly, comp, Region::segment(map.edge(edge)), threshold, dir, max_depth)?
        {
            Verdict::Certified(c) => certs.push(c),
            Verdict::Inconclusive => return Ok(None),
        }
    }
    Ok(Some(certs.try_into().expect("exactly four edges")))
}

/// Attempts a Miranda certificate at the given margin, trying the standard
/// orientation first and then the three symmetric variants.
pub fn certify_miranda(
    poly: &TrigPolynomial,
    map: &AffineSquareMap,
    margin: f64,
    max_depth: usize,
) -> Result<Verdict<MirandaCertificate>, Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    if margin <= 0.0 || !margin.is_finite() {
        return Err(Error::InvalidInterval(margin, margin));
    }
    for orientation in ORIENTATIONS {
        if let Some(edges) = certify_edges(poly, map, orientation, margin, max_depth)? {
            return Ok(Verdict::Certified(MirandaCertificate {
                map: *map,
                margin,
                orientation,
                edges,
                poly_fingerprint: poly_fingerprint(poly),
            }));
        }
    }
    Ok(Verdict::Inconclusive)
}

/// Largest margin at which [`certify_miranda`] succeeds, found by 20
/// bisection steps over `[0, Σ|wⱼ|]`. Returns 0 when no margin certifies.
pub fn certified_margin(
    poly: &TrigPolynomial,
    map: &AffineSquareMap,
    max_depth: usize,
) -> Result<f64, Error> {
    if poly.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poly.dim() });
    }
    let mut lo = 0.0f64;
    let mut hi = poly.sum_abs_weights();
    if hi <= 0.0 {
        return Ok(0.0);
    }
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if certify_miranda(poly, map, mid, max_depth)?.is_certified() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Search parameters for [`search_box`].
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Tolerance for the zero-location pass.
    pub zero_tol: f64,
    /// Subdivision depth for edge certification.
    pub max_depth: usize,
    /// Candidates must certify at least this margin.
    pub min_margin: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { zero_tol: 1e-3, max_depth: 12, min_margin: 0.01 }
    }
}

/// Heuristic search for a certifiable affine square around a zero of the
/// polynomial: approximate zeros are located by branch-and-prune, then a
/// deterministic grid of rotations (multiples of π/8), scales (dyadic
/// fractions of π) and aspect ratios is tried, keeping the map with the
/// largest certified margin. Only certified results are returned.
pub fn search_box(
    poly: &TrigPolynomial,
    region: &crate::interval::Box2,
    config: &SearchConfig,
) -> Result<(AffineSquareMap, f64), Error> {
    use std::f64::consts::PI;
    let clusters = crate::winding::zero_search(poly, region, config.zero_tol)?;
    let mut best: Option<(AffineSquareMap, f64)> = None;
    for cluster in &clusters {
        let c = cluster.center();
        for scale_div in [4.0, 8.0, 16.0] {
            let s = PI / scale_div;
            for rot in 0..8 {
                let theta = rot as f64 * PI / 8.0;
                for aspect in [1.0, 2.0, 0.5] {
                    let u = [s * theta.cos(), s * theta.sin()];
                    let v = [-s * aspect * theta.sin(), s * aspect * theta.cos()];
                    let base = [c[0] - 0.5 * (u[0] + v[0]), c[1] - 0.5 * (u[1] + v[1])];
                    let Ok(map) = AffineSquareMap::new(base, u, v) else { continue };
                    // Skip unless it beats the incumbent at its margin.
                    let floor = best.as_ref().map_or(config.min_margin, |(_, m)| *m);
                    if !certify_miranda(poly, &map, floor, config.max_depth)?.is_certified() {
                        continue;
                    }
                    let m = certified_margin(poly, &map, config.max_depth)?;
                    if m > best.as_ref().map_or(0.0, |(_, bm)| *bm) {
                        best = Some((map, m));
                    }
                }
            }
        }
    }
    best.ok_or(Error::NotFound)
}
