//! Certificate documents: a line-based text format with hexadecimal floats.
//!
//! A document embeds the polynomial, the claimed bounds and every leaf region
//! with its enclosure, so [`recheck`] can re-verify the claim leaf by leaf
//! without re-running the subdivision search. All floats round-trip
//! bit-exactly through the `0x1.…p±e` hexadecimal format.

use std::fmt::Write as _;

use crate::charfn::{Term, TrigPolynomial};
use crate::interval::{
    enclose, Box2, Component, Direction, Interval, Region, Segment, SignCertificate, SignLeaf,
};
use crate::miranda::{poly_fingerprint, AffineSquareMap, MirandaCertificate, Orientation, EDGES};
use crate::winding::{sector, ArcWitness, PolyPath, WindingCertificate};
use crate::Error;

const HEADER: &str = "zerocert v1";

// ---------------------------------------------------------------------------
// Hexadecimal floats

/// C-style `%a` formatting with exact round-trip.
pub fn hex_f64(x: f64) -> String {
    if x.is_nan() || x.is_infinite() {
        // Certificates never contain these; keep the encoding total anyway.
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (exp, mant) = if raw_exp == 0 {
        // Subnormal: normalize the leading bit into position 52.
        let msb = 63 - frac.leading_zeros() as i64;
        (msb - 1074, (frac << (52 - msb)) & ((1u64 << 52) - 1))
    } else {
        (raw_exp - 1023, frac)
    };
    let mut digits = String::new();
    let mut m = mant;
    for i in (0..13).rev() {
        let nib = (m >> (i * 4)) & 0xf;
        digits.push(char::from_digit(nib as u32, 16).unwrap());
        m &= (1u64 << (i * 4)) - 1;
    }
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x1p{exp:+}")
    } else {
        format!("{sign}0x1.{digits}p{exp:+}")
    }
}

/// Parses the output of [`hex_f64`] exactly.
pub fn parse_hex_f64(s: &str) -> Result<f64, Error> {
    let bad = || Error::MalformedCertificate(format!("bad hex float {s:?}"));
    match s {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mant_str, exp_str) = rest.split_once('p').ok_or_else(bad)?;
    let exp: i64 = exp_str.parse().map_err(|_| bad())?;
    let (lead, nibs) = match mant_str.split_once('.') {
        Some((l, n)) => (l, n),
        None => (mant_str, ""),
    };
    let sign_bit = if neg { 1u64 << 63 } else { 0 };
    if lead == "0" {
        if nibs.is_empty() && exp == 0 {
            return Ok(f64::from_bits(sign_bit));
        }
        return Err(bad());
    }
    if lead != "1" || nibs.len() > 13 {
        return Err(bad());
    }
    let mut frac = 0u64;
    for (i, ch) in nibs.chars().enumerate() {
        let d = ch.to_digit(16).ok_or_else(bad)? as u64;
        frac |= d << ((12 - i) * 4);
    }
    if (-1022..=1023).contains(&exp) {
        Ok(f64::from_bits(sign_bit | (((exp + 1023) as u64) << 52) | frac))
    } else if exp < -1022 {
        let shift = (-1022 - exp) as u32;
        let full = (1u64 << 52) | frac;
        // Only exact subnormals round-trip; hex_f64 never emits anything else.
        if shift > 52 || full & ((1 << shift) - 1) != 0 {
            return Err(bad());
        }
        Ok(f64::from_bits(sign_bit | (full >> shift)))
    } else {
        Err(bad())
    }
}

// ---------------------------------------------------------------------------
// Writers

fn component_name(c: Component) -> &'static str {
    match c {
        Component::Re => "re",
        Component::Im => "im",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Geq => "geq",
        Direction::Leq => "leq",
    }
}

fn write_poly(out: &mut String, poly: &TrigPolynomial) {
    writeln!(out, "poly {} {}", poly.dim(), poly.terms().len()).unwrap();
    for t in poly.terms() {
        write!(out, "term {}", hex_f64(t.weight)).unwrap();
        for &f in &t.frequency {
            write!(out, " {}", hex_f64(f)).unwrap();
        }
        out.push('\n');
    }
}

fn write_region(out: &mut String, r: &Region) {
    match r {
        Region::Rect(b) => {
            write!(
                out,
                "rect {} {} {} {}",
                hex_f64(b.x.lo()),
                hex_f64(b.x.hi()),
                hex_f64(b.y.lo()),
                hex_f64(b.y.hi())
            )
            .unwrap();
        }
        Region::Arc { seg, t } => {
            write!(out, "arc").unwrap();
            for iv in seg.start.iter().chain(&seg.dir).chain([t]) {
                write!(out, " {} {}", hex_f64(iv.lo()), hex_f64(iv.hi())).unwrap();
            }
        }
    }
}

fn write_sign_block(out: &mut String, cert: &SignCertificate) {
    writeln!(out, "target {}", component_name(cert.target)).unwrap();
    writeln!(out, "direction {}", direction_name(cert.direction)).unwrap();
    writeln!(out, "threshold {}", hex_f64(cert.threshold)).unwrap();
    writeln!(out, "depth_used {}", cert.depth_used).unwrap();
    writeln!(out, "regions {}", cert.regions.len()).unwrap();
    for r in &cert.regions {
        out.push_str("region ");
        write_region(out, r);
        out.push('\n');
    }
    writeln!(out, "leaves {}", cert.leaves.len()).unwrap();
    for l in &cert.leaves {
        out.push_str("leaf ");
        write_region(out, &l.region);
        writeln!(out, " bound {} {}", hex_f64(l.bound.lo()), hex_f64(l.bound.hi())).unwrap();
    }
}

fn document(op: &str, poly: &TrigPolynomial, body: impl FnOnce(&mut String)) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "operation {op}").unwrap();
    writeln!(out, "fingerprint {}", poly_fingerprint(poly)).unwrap();
    write_poly(&mut out, poly);
    body(&mut out);
    out.push_str("end\n");
    out
}

/// Serializes a sign certificate together with the polynomial it is about.
pub fn write_sign(poly: &TrigPolynomial, cert: &SignCertificate) -> String {
    document("sign", poly, |out| write_sign_block(out, cert))
}

pub fn write_miranda(poly: &TrigPolynomial, cert: &MirandaCertificate) -> String {
    document("miranda", poly, |out| {
        let m = &cert.map;
        writeln!(
            out,
            "map {} {} {} {} {} {}",
            hex_f64(m.base()[0]),
            hex_f64(m.base()[1]),
            hex_f64(m.u()[0]),
            hex_f64(m.u()[1]),
            hex_f64(m.v()[0]),
            hex_f64(m.v()[1])
        )
        .unwrap();
        writeln!(out, "margin {}", hex_f64(cert.margin)).unwrap();
        writeln!(out, "orientation {}", cert.orientation.name()).unwrap();
        for (edge, ec) in ["y0", "y1", "x0", "x1"].iter().zip(&cert.edges) {
            writeln!(out, "edge {edge}").unwrap();
            write_sign_block(out, ec);
        }
    })
}

pub fn write_winding(poly: &TrigPolynomial, cert: &WindingCertificate) -> String {
    document("winding", poly, |out| {
        let vs = cert.path.vertices();
        writeln!(out, "path {} {}", if cert.path.is_closed() { "closed" } else { "open" }, vs.len())
            .unwrap();
        for v in vs {
            writeln!(out, "vertex {} {}", hex_f64(v[0]), hex_f64(v[1])).unwrap();
        }
        writeln!(out, "winding {}", cert.winding).unwrap();
        writeln!(out, "modulus_floor {}", hex_f64(cert.modulus_floor)).unwrap();
        writeln!(out, "arcs {}", cert.arcs.len()).unwrap();
        for a in &cert.arcs {
            writeln!(
                out,
                "arc {} {} {} {} {} {} {} {} {}",
                a.segment_index,
                hex_f64(a.t.lo()),
                hex_f64(a.t.hi()),
                hex_f64(a.witness_angle),
                hex_f64(a.abs_lower),
                hex_f64(a.enclosure.re.lo()),
                hex_f64(a.enclosure.re.hi()),
                hex_f64(a.enclosure.im.lo()),
                hex_f64(a.enclosure.im.hi())
            )
            .unwrap();
        }
    })
}

// ---------------------------------------------------------------------------
// Parsing and re-checking

struct Cursor<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { lines: text.lines().peekable(), line_no: 0 }
    }

    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::MalformedCertificate(format!("line {}: {}", self.line_no, msg.into()))
    }

    fn next(&mut self) -> Result<&'a str, Error> {
        self.line_no += 1;
        self.lines.next().ok_or_else(|| self.fail("unexpected end of document"))
    }

    fn peek(&mut self) -> Option<&&'a str> {
        self.lines.peek()
    }

    /// Next line, which must start with `tag`; returns the remaining tokens.
    fn tagged(&mut self, tag: &str) -> Result<Vec<&'a str>, Error> {
        let line = self.next()?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(tag) {
            return Err(self.fail(format!("expected {tag:?}, got {line:?}")));
        }
        Ok(tokens.collect())
    }
}

fn parse_usize(c: &Cursor, s: &str) -> Result<usize, Error> {
    s.parse().map_err(|_| c.fail(format!("bad integer {s:?}")))
}

fn parse_interval(c: &Cursor, lo: &str, hi: &str) -> Result<Interval, Error> {
    Interval::new(parse_hex_f64(lo)?, parse_hex_f64(hi)?)
        .map_err(|e| c.fail(format!("bad interval: {e}")))
}

fn parse_region(c: &Cursor, tokens: &[&str]) -> Result<Region, Error> {
    match tokens.first() {
        Some(&"rect") if tokens.len() == 5 => {
            let v: Vec<f64> =
                tokens[1..].iter().map(|s| parse_hex_f64(s)).collect::<Result<_, _>>()?;
            Ok(Region::Rect(
                Box2::new(v[0], v[1], v[2], v[3]).map_err(|e| c.fail(format!("bad box: {e}")))?,
            ))
        }
        Some(&"arc") if tokens.len() == 11 => {
            let iv = |i: usize| parse_interval(c, tokens[1 + 2 * i], tokens[2 + 2 * i]);
            Ok(Region::Arc {
                seg: Segment { start: [iv(0)?, iv(1)?], dir: [iv(2)?, iv(3)?] },
                t: iv(4)?,
            })
        }
        _ => Err(c.fail(format!("bad region {tokens:?}"))),
    }
}

fn parse_poly(c: &mut Cursor) -> Result<TrigPolynomial, Error> {
    let head = c.tagged("poly")?;
    if head.len() != 2 {
        return Err(c.fail("poly line needs dim and term count"));
    }
    let dim = parse_usize(c, head[0])?;
    let n = parse_usize(c, head[1])?;
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let toks = c.tagged("term")?;
        if toks.len() != dim + 1 {
            return Err(c.fail("term arity mismatch"));
        }
        let weight = parse_hex_f64(toks[0])?;
        let frequency =
            toks[1..].iter().map(|s| parse_hex_f64(s)).collect::<Result<Vec<f64>, _>>()?;
        terms.push(Term { weight, frequency });
    }
    TrigPolynomial::new(dim, terms).map_err(|e| c.fail(format!("bad polynomial: {e}")))
}

fn parse_sign_block(c: &mut Cursor) -> Result<SignCertificate, Error> {
    let target = match c.tagged("target")?.as_slice() {
        ["re"] => Component::Re,
        ["im"] => Component::Im,
        other => return Err(c.fail(format!("bad target {other:?}"))),
    };
    let direction = match c.tagged("direction")?.as_slice() {
        ["geq"] => Direction::Geq,
        ["leq"] => Direction::Leq,
        other => return Err(c.fail(format!("bad direction {other:?}"))),
    };
    let toks = c.tagged("threshold")?;
    let threshold = parse_hex_f64(toks.first().ok_or_else(|| c.fail("missing threshold"))?)?;
    let toks = c.tagged("depth_used")?;
    let depth_used = parse_usize(c, toks.first().ok_or_else(|| c.fail("missing depth"))?)?;
    let toks = c.tagged("regions")?;
    let nr = parse_usize(c, toks.first().ok_or_else(|| c.fail("missing count"))?)?;
    let mut regions = Vec::with_capacity(nr);
    for _ in 0..nr {
        let toks = c.tagged("region")?;
        regions.push(parse_region(c, &toks)?);
    }
    let toks = c.tagged("leaves")?;
    let nl = parse_usize(c, toks.first().ok_or_else(|| c.fail("missing count"))?)?;
    let mut leaves = Vec::with_capacity(nl);
    for _ in 0..nl {
        let toks = c.tagged("leaf")?;
        if toks.len() < 3 {
            return Err(c.fail("short leaf line"));
        }
        let (region_toks, bound_toks) = toks.split_at(toks.len() - 3);
        if bound_toks[0] != "bound" {
            return Err(c.fail("leaf missing bound"));
        }
        leaves.push(SignLeaf {
            region: parse_region(c, region_toks)?,
            bound: parse_interval(c, bound_toks[1], bound_toks[2])?,
        });
    }
    Ok(SignCertificate { target, threshold, direction, regions, leaves, depth_used })
}

/// A parsed certificate document.
#[allow(clippy::large_enum_variant)]
pub enum Document {
    Sign { poly: TrigPolynomial, cert: SignCertificate },
    Miranda { poly: TrigPolynomial, cert: MirandaCertificate },
    Winding { poly: TrigPolynomial, cert: WindingCertificate },
}

pub fn parse_document(text: &str) -> Result<Document, Error> {
    let mut c = Cursor::new(text);
    let header = c.next()?;
    if header.trim() != HEADER {
        return Err(c.fail(format!("expected header {HEADER:?}")));
    }
    let op = c.tagged("operation")?;
    let fingerprint = c
        .tagged("fingerprint")?
        .first()
        .ok_or_else(|| c.fail("missing fingerprint"))?
        .to_string();
    let poly = parse_poly(&mut c)?;
    if poly_fingerprint(&poly) != fingerprint {
        return Err(c.fail("fingerprint does not match embedded polynomial"));
    }
    let doc = match op.as_slice() {
        ["sign"] => Document::Sign { cert: parse_sign_block(&mut c)?, poly },
        ["miranda"] => {
            let mt = c.tagged("map")?;
            if mt.len() != 6 {
                return Err(c.fail("map needs 6 coefficients"));
            }
            let v: Vec<f64> = mt.iter().map(|s| parse_hex_f64(s)).collect::<Result<_, _>>()?;
            let map = AffineSquareMap::new([v[0], v[1]], [v[2], v[3]], [v[4], v[5]])
                .map_err(|e| c.fail(format!("bad map: {e}")))?;
            let toks = c.tagged("margin")?;
            let margin = parse_hex_f64(toks.first().ok_or_else(|| c.fail("missing margin"))?)?;
            let toks = c.tagged("orientation")?;
            let orientation = Orientation::from_name(
                toks.first().ok_or_else(|| c.fail("missing orientation"))?,
            )
            .ok_or_else(|| c.fail("unknown orientation"))?;
            let mut edges = Vec::with_capacity(4);
            for name in ["y0", "y1", "x0", "x1"] {
                let t = c.tagged("edge")?;
                if t.as_slice() != [name] {
                    return Err(c.fail(format!("expected edge {name}")));
                }
                edges.push(parse_sign_block(&mut c)?);
            }
            Document::Miranda {
                cert: MirandaCertificate {
                    map,
                    margin,
                    orientation,
                    edges: edges.try_into().map_err(|_| c.fail("edge count"))?,
                    poly_fingerprint: fingerprint,
                },
                poly,
            }
        }
        ["winding"] => {
            let pt = c.tagged("path")?;
            if pt.len() != 2 {
                return Err(c.fail("bad path line"));
            }
            let closed = match pt[0] {
                "closed" => true,
                "open" => false,
                _ => return Err(c.fail("bad path kind")),
            };
            let nv = parse_usize(&c, pt[1])?;
            let mut vertices = Vec::with_capacity(nv);
            for _ in 0..nv {
                let vt = c.tagged("vertex")?;
                if vt.len() != 2 {
                    return Err(c.fail("bad vertex"));
                }
                vertices.push([parse_hex_f64(vt[0])?, parse_hex_f64(vt[1])?]);
            }
            let path = PolyPath::new(vertices, closed).map_err(|e| c.fail(format!("{e}")))?;
            let toks = c.tagged("winding")?;
            let winding: i64 = toks
                .first()
                .ok_or_else(|| c.fail("missing winding"))?
                .parse()
                .map_err(|_| c.fail("bad winding"))?;
            let toks = c.tagged("modulus_floor")?;
            let modulus_floor =
                parse_hex_f64(toks.first().ok_or_else(|| c.fail("missing floor"))?)?;
            let toks = c.tagged("arcs")?;
            let na = parse_usize(&c, toks.first().ok_or_else(|| c.fail("missing count"))?)?;
            let mut arcs = Vec::with_capacity(na);
            for _ in 0..na {
                let at = c.tagged("arc")?;
                if at.len() != 9 {
                    return Err(c.fail("bad arc line"));
                }
                arcs.push(ArcWitness {
                    segment_index: parse_usize(&c, at[0])?,
                    t: parse_interval(&c, at[1], at[2])?,
                    witness_angle: parse_hex_f64(at[3])?,
                    abs_lower: parse_hex_f64(at[4])?,
                    enclosure: crate::interval::ComplexBox {
                        re: parse_interval(&c, at[5], at[6])?,
                        im: parse_interval(&c, at[7], at[8])?,
                    },
                });
            }
            Document::Winding {
                cert: WindingCertificate {
                    path,
                    winding,
                    modulus_floor,
                    arcs,
                    poly_fingerprint: fingerprint,
                },
                poly,
            }
        }
        other => return Err(c.fail(format!("unknown operation {other:?}"))),
    };
    let endline = c.tagged("end");
    endline?;
    if c.peek().map(|l| !l.trim().is_empty()).unwrap_or(false) {
        return Err(c.fail("trailing content after end"));
    }
    Ok(doc)
}

fn fail(msg: impl Into<String>) -> Error {
    Error::RecheckFailed(msg.into())
}

fn recheck_sign_block(poly: &TrigPolynomial, cert: &SignCertificate) -> Result<(), Error> {
    // Every leaf must lie inside a stated region, the leaves must tile the
    // regions measure-wise, and a fresh enclosure of each leaf must satisfy
    // the strict inequality.
    let region_measure: f64 = cert.regions.iter().map(|r| r.measure()).sum();
    let mut leaf_measure = 0.0;
    for leaf in &cert.leaves {
        if !cert.regions.iter().any(|r| leaf.region.subset_of(r)) {
            return Err(fail("leaf outside the certified region"));
        }
        leaf_measure += leaf.region.measure();
        let bound = match cert.target {
            Component::Re => enclose(poly, &leaf.region)?.re,
            Component::Im => enclose(poly, &leaf.region)?.im,
        };
        let ok = match cert.direction {
            Direction::Geq => bound.lo() > cert.threshold,
            Direction::Leq => bound.hi() < cert.threshold,
        };
        if !ok {
            return Err(fail(format!(
                "leaf enclosure [{}, {}] violates threshold {}",
                bound.lo(),
                bound.hi(),
                cert.threshold
            )));
        }
    }
    let slack = 1e-9 * region_measure.max(1e-300);
    if (leaf_measure - region_measure).abs() > slack {
        return Err(fail("leaves do not tile the certified region"));
    }
    Ok(())
}

fn recheck_miranda(poly: &TrigPolynomial, cert: &MirandaCertificate) -> Result<(), Error> {
    if cert.margin.is_nan() || cert.margin <= 0.0 {
        return Err(fail("margin must be positive"));
    }
    for (edge, ec) in EDGES.iter().zip(&cert.edges) {
        let (comp, dir) = cert.orientation.edge_condition(*edge);
        let want_threshold = match dir {
            Direction::Leq => -cert.margin,
            Direction::Geq => cert.margin,
        };
        if ec.target != comp || ec.direction != dir || ec.threshold != want_threshold {
            return Err(fail("edge certificate does not match the orientation"));
        }
        let expect = Region::segment(cert.map.edge(*edge));
        if ec.regions.as_slice() != [expect] {
            return Err(fail("edge certificate region is not the map edge"));
        }
        recheck_sign_block(poly, ec)?;
    }
    Ok(())
}

fn recheck_winding(poly: &TrigPolynomial, cert: &WindingCertificate) -> Result<(), Error> {
    if !cert.path.is_closed() {
        return Err(fail("winding path must be closed"));
    }
    let segments = cert.path.segments();
    let mut covered = vec![0.0f64; segments.len()];
    let mut prev_index = 0usize;
    for arc in &cert.arcs {
        let seg = segments
            .get(arc.segment_index)
            .ok_or_else(|| fail("arc references a missing segment"))?;
        if arc.segment_index < prev_index {
            return Err(fail("arcs out of traversal order"));
        }
        prev_index = arc.segment_index;
        let e = enclose(poly, &Region::Arc { seg: *seg, t: arc.t })?;
        let (_, extent) = sector(&e).ok_or_else(|| fail("arc enclosure contains zero"))?;
        if extent >= std::f64::consts::FRAC_PI_2 {
            return Err(fail("arc spans a quarter turn or more"));
        }
        if e.abs_lower() < cert.modulus_floor {
            return Err(fail("modulus floor exceeds an arc's certified bound"));
        }
        covered[arc.segment_index] += arc.t.width();
    }
    if covered.iter().any(|&w| (w - 1.0).abs() > 1e-9) {
        return Err(fail("arcs do not tile the path parameter"));
    }
    let mut total = 0.0;
    for (k, arc) in cert.arcs.iter().enumerate() {
        let next = &cert.arcs[(k + 1) % cert.arcs.len()];
        let mut d = next.witness_angle - arc.witness_angle;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    if (turns - cert.winding as f64).abs() > 1e-6 {
        return Err(fail(format!("stated winding {} but arcs sum to {turns}", cert.winding)));
    }
    Ok(())
}

/// Re-verifies a single certificate document leaf by leaf. Returns a one-line
/// summary on success.
pub fn recheck(text: &str) -> Result<String, Error> {
    match parse_document(text)? {
        Document::Sign { poly, cert } => {
            recheck_sign_block(&poly, &cert)?;
            Ok(format!("sign certificate: {} leaves verified", cert.leaves.len()))
        }
        Document::Miranda { poly, cert } => {
            recheck_miranda(&poly, &cert)?;
            Ok(format!(
                "miranda certificate: margin {} verified ({} orientation)",
                cert.margin,
                cert.orientation.name()
            ))
        }
        Document::Winding { poly, cert } => {
            recheck_winding(&poly, &cert)?;
            Ok(format!(
                "winding certificate: winding {} with {} arcs verified",
                cert.winding,
                cert.arcs.len()
            ))
        }
    }
}

/// Splits a file that may concatenate several documents and re-checks each.
pub fn recheck_all(text: &str) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim() == HEADER && !current.trim().is_empty() {
            out.push(recheck(&current)?);
            current.clear();
        }
        current.push_str(line);
        current.push('\n');
    }
    if !current.trim().is_empty() {
        out.push(recheck(&current)?);
    }
    if out.is_empty() {
        return Err(Error::MalformedCertificate("empty certificate file".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::DiscreteDistribution;
    use crate::interval::certify_sign;
    use crate::miranda::certify_miranda;
    use crate::winding::winding_number;

    const PI: f64 = std::f64::consts::PI;

    fn phi() -> TrigPolynomial {
        DiscreteDistribution::builtin_mu().char_poly()
    }

    #[test]
    fn hex_round_trip_specials() {
        for x in [0.0, -0.0, 1.0, -1.0, 0.5, 1.0 / 3.0, PI, -PI, 1e-300, f64::MIN_POSITIVE / 8.0]
        {
            let s = hex_f64(x);
            let y = parse_hex_f64(&s).unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{x} -> {s}");
        }
        assert_eq!(hex_f64(1.0), "0x1p+0");
        assert_eq!(hex_f64(0.5), "0x1p-1");
    }

    #[test]
    fn sign_certificate_survives_serialization_and_recheck() {
        let seg = Segment::from_points([PI, -PI], [PI, PI]);
        let cert = certify_sign(
            &phi(),
            Component::Re,
            Region::segment(seg),
            -0.1,
            Direction::Leq,
            8,
        )
        .unwrap()
        .certified()
        .unwrap();
        let doc = write_sign(&phi(), &cert);
        let summary = recheck(&doc).unwrap();
        assert!(summary.contains("verified"));
        // Parsing is exact.
        match parse_document(&doc).unwrap() {
            Document::Sign { cert: parsed, .. } => assert_eq!(parsed, cert),
            _ => panic!("wrong document kind"),
        }
    }

    #[test]
    fn miranda_certificate_rechecks() {
        let psi = AffineSquareMap::builtin_psi();
        let cert = certify_miranda(&phi(), &psi, 0.025, 14).unwrap().certified().unwrap();
        let doc = write_miranda(&phi(), &cert);
        recheck(&doc).unwrap();
    }

    #[test]
    fn winding_certificate_rechecks() {
        let z = 2.0 * PI / 3.0;
        let b = Box2::new(z - 0.1, z + 0.1, -z - 0.1, -z + 0.1).unwrap();
        let cert = winding_number(&phi(), &PolyPath::rectangle(&b), 16)
            .unwrap()
            .certified()
            .unwrap();
        let doc = write_winding(&phi(), &cert);
        recheck(&doc).unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let seg = Segment::from_points([PI, -PI], [PI, PI]);
        let cert = certify_sign(
            &phi(),
            Component::Re,
            Region::segment(seg),
            -0.1,
            Direction::Leq,
            8,
        )
        .unwrap()
        .certified()
        .unwrap();
        let doc = write_sign(&phi(), &cert);
        // Claim a much stronger threshold than the leaves support.
        let tampered = doc.replace(&format!("threshold {}", hex_f64(-0.1)), "threshold -0x1p+1");
        assert!(matches!(recheck(&tampered), Err(Error::RecheckFailed(_))));
        // Corrupt the embedded polynomial: fingerprint mismatch.
        let corrupt = doc.replace("term 0x1.5555555555555p-2 0x0p+0", "term 0x1p-2 0x0p+0");
        assert!(matches!(recheck(&corrupt), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn concatenated_documents_recheck_individually() {
        let seg = Segment::from_points([PI, -PI], [PI, PI]);
        let cert = certify_sign(
            &phi(),
            Component::Re,
            Region::segment(seg),
            -0.1,
            Direction::Leq,
            8,
        )
        .unwrap()
        .certified()
        .unwrap();
        let doc = write_sign(&phi(), &cert);
        let both = format!("{doc}{doc}");
        assert_eq!(recheck_all(&both).unwrap().len(), 2);
    }
}
