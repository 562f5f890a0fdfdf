use super::{Box2, Interval};

/// Affine segment `t ↦ start + t·dir` in `R²` with interval coefficients.
///
/// Interval coefficients let a segment whose true endpoints are sums of
/// doubles (e.g. an edge of an affine-mapped square, `base + v + x·u`) be
/// represented without committing to a rounded endpoint: the enclosure of the
/// segment then covers the exact edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: [Interval; 2],
    pub dir: [Interval; 2],
}

impl Segment {
    /// Segment from point `a` to point `b` (parameter 0 to 1).
    pub fn from_points(a: [f64; 2], b: [f64; 2]) -> Self {
        let p = |x: f64| Interval::point(x);
        Self {
            start: [p(a[0]), p(a[1])],
            dir: [p(b[0]).sub(&p(a[0])), p(b[1]).sub(&p(a[1]))],
        }
    }

    pub fn point_at(&self, t: &Interval) -> (Interval, Interval) {
        (
            self.start[0].add(&t.mul(&self.dir[0])),
            self.start[1].add(&t.mul(&self.dir[1])),
        )
    }

    /// Approximate midpoint-style sample at parameter `t`, for tests and
    /// reporting; not part of any soundness argument.
    pub fn sample(&self, t: f64) -> [f64; 2] {
        [
            self.start[0].mid() + t * self.dir[0].mid(),
            self.start[1].mid() + t * self.dir[1].mid(),
        ]
    }
}

/// A certification region: an axis-aligned rectangle, or a parameter range on
/// an affine segment (segments are degenerate boxes traversed through their
/// parameterization, so one engine handles edges, paths and boxes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Rect(Box2),
    Arc { seg: Segment, t: Interval },
}

impl Region {
    pub fn segment(seg: Segment) -> Self {
        Region::Arc { seg, t: Interval::new(0.0, 1.0).unwrap() }
    }

    /// Interval coordinates covering every point of the region.
    pub fn coords(&self) -> (Interval, Interval) {
        match self {
            Region::Rect(b) => (b.x, b.y),
            Region::Arc { seg, t } => seg.point_at(t),
        }
    }

    /// Bisect: rectangles split their longest axis at the midpoint (ties
    /// split x), arcs split the parameter at its midpoint.
    pub fn split(&self) -> (Region, Region) {
        match self {
            Region::Rect(b) => {
                let (a, c) = b.split();
                (Region::Rect(a), Region::Rect(c))
            }
            Region::Arc { seg, t } => {
                let m = t.mid();
                (
                    Region::Arc { seg: *seg, t: Interval::new(t.lo(), m).unwrap() },
                    Region::Arc { seg: *seg, t: Interval::new(m, t.hi()).unwrap() },
                )
            }
        }
    }

    /// Parameter-space measure: area for rectangles, parameter width for
    /// arcs. Used by the certificate re-checker to confirm the leaves tile
    /// the stated region.
    pub fn measure(&self) -> f64 {
        match self {
            Region::Rect(b) => b.x.width() * b.y.width(),
            Region::Arc { t, .. } => t.width(),
        }
    }

    /// Whether this region lies within `other` (regions of the same kind;
    /// arcs must share the same segment).
    pub fn subset_of(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Rect(a), Region::Rect(b)) => a.subset_of(b),
            (Region::Arc { seg: s1, t: t1 }, Region::Arc { seg: s2, t: t2 }) => {
                s1 == s2 && t1.subset_of(t2)
            }
            _ => false,
        }
    }

    /// A representative point for sampling tests: `(u, v)` in `[0,1]²` maps
    /// into the region (arcs ignore `v`).
    pub fn sample(&self, u: f64, v: f64) -> [f64; 2] {
        match self {
            Region::Rect(b) => [
                b.x.lo() + u * b.x.width(),
                b.y.lo() + v * b.y.width(),
            ],
            Region::Arc { seg, t } => seg.sample(t.lo() + u * t.width()),
        }
    }
}
