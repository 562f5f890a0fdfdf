//! End-to-end acceptance suite: one pass/fail line per criterion.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerocert::charfn::{DiscreteDistribution, Term, TrigPolynomial};
use zerocert::interval::{certify_sign, enclose, Box2, Component, Direction, Region, Segment};
use zerocert::miranda::{certified_margin, certify_miranda, AffineSquareMap};
use zerocert::winding::{
    constraints_down_then_right, constraints_right_then_down, path_down_then_right,
    path_right_then_down, verify_path_constraints, winding_number, zero_search, PathVerification,
    PolyPath,
};

const Z: f64 = 2.0 * PI / 3.0;

// Debug builds are far slower; scale the wall-clock budgets.
const TIME_SLACK: f64 = if cfg!(debug_assertions) { 20.0 } else { 1.0 };

fn phi() -> TrigPolynomial {
    DiscreteDistribution::builtin_mu().char_poly()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn criterion_1_boundary_identity() -> Outcome {
    let start = Instant::now();
    let p = phi();
    let mut max_dev = 0.0f64;
    for k in 0..100 {
        let s = -PI + 2.0 * PI * k as f64 / 99.0;
        for t in [[PI, s], [-PI, s], [s, PI], [s, -PI]] {
            let v = p.eval(&t).unwrap();
            max_dev = max_dev.max((v.re + 1.0 / 3.0).abs().max(v.im.abs()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if max_dev > 1e-12 {
        return Err(format!("boundary deviation {max_dev:e} exceeds 1e-12"));
    }
    if elapsed > 0.1 * TIME_SLACK {
        return Err(format!("took {elapsed:.3}s, budget 0.1s"));
    }
    Ok(format!("max deviation {max_dev:e} over 400 boundary points"))
}

fn criterion_2_anchor_memberships() -> Outcome {
    let p = phi();
    let cases: [([f64; 2], bool, f64); 4] = [
        ([0.0, 0.0], true, 1.0),
        ([PI, -PI], true, -1.0 / 3.0),
        ([PI / 2.0, PI / 2.0], false, 2.0 / 3.0),
        ([-PI / 2.0, -PI / 2.0], false, -2.0 / 3.0),
    ];
    for (t, real_part, target) in cases {
        let v = p.eval(&t).unwrap();
        let got = if real_part { v.re } else { v.im };
        if (got - target).abs() > 1e-12 {
            return Err(format!("value {got:e} at {t:?} off target {target:e}"));
        }
        let ok = if target > 0.0 { got >= 0.1 } else { got <= -0.1 };
        if !ok {
            return Err(format!("value {got:e} at {t:?} misses the 1/10 threshold"));
        }
    }
    Ok("all four anchor values exact and beyond the 1/10 thresholds".into())
}

fn criterion_3_miranda_reproduction() -> Outcome {
    let start = Instant::now();
    let p = phi();
    let psi = AffineSquareMap::builtin_psi();
    for eps in [0.025, 0.05] {
        let v = certify_miranda(&p, &psi, eps, 14).map_err(|e| e.to_string())?;
        if !v.is_certified() {
            return Err(format!("margin {eps} inconclusive at depth 14"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 1.0 * TIME_SLACK {
        return Err(format!("took {elapsed:.3}s, budget 1s"));
    }
    Ok(format!("margins 0.025 and 0.05 certified in {elapsed:.3}s"))
}

fn criterion_4_margin_bracket() -> Outcome {
    let p = phi();
    let psi = AffineSquareMap::builtin_psi();
    let m = certified_margin(&p, &psi, 14).map_err(|e| e.to_string())?;
    if !(0.050..=0.056).contains(&m) {
        return Err(format!("certified margin {m} outside [0.050, 0.056]"));
    }
    // Independent ceiling: densely sampled minimum of the signed edge values.
    let mut oracle = f64::INFINITY;
    for k in 0..=10_000 {
        let s = k as f64 / 10_000.0;
        let signed = [
            -p.eval(&psi.apply(s, 0.0)).unwrap().re,
            p.eval(&psi.apply(s, 1.0)).unwrap().re,
            -p.eval(&psi.apply(0.0, s)).unwrap().im,
            p.eval(&psi.apply(1.0, s)).unwrap().im,
        ];
        for v in signed {
            oracle = oracle.min(v);
        }
    }
    if m > oracle {
        return Err(format!("certified margin {m} exceeds sampled edge minimum {oracle}"));
    }
    Ok(format!("certified margin {m:.6} <= sampled edge minimum {oracle:.6}"))
}

fn criterion_5_zero_isolation() -> Outcome {
    let p = phi();
    let b = Box2::new(-PI, PI, -PI, PI).unwrap();
    let clusters = zero_search(&p, &b, 1e-6).map_err(|e| e.to_string())?;
    if clusters.len() != 2 {
        return Err(format!("expected 2 clusters, got {}", clusters.len()));
    }
    for (c, z) in clusters.iter().zip([[-Z, Z], [Z, -Z]]) {
        let d = (c.center()[0] - z[0]).hypot(c.center()[1] - z[1]);
        if d > 1e-6 {
            return Err(format!("cluster center {:?} is {d:e} from {z:?}", c.center()));
        }
    }
    Ok("2 clusters, centers within 1e-6 of (+-2pi/3, -+2pi/3)".into())
}

fn criterion_6_winding_certificates() -> Outcome {
    let p = phi();
    for z in [[Z, -Z], [-Z, Z]] {
        let b = Box2::new(z[0] - 0.4, z[0] + 0.4, z[1] - 0.4, z[1] + 0.4).unwrap();
        let c = winding_number(&p, &PolyPath::rectangle(&b), 18)
            .map_err(|e| e.to_string())?
            .certified()
            .ok_or("winding around a zero inconclusive")?;
        if c.winding.abs() != 1 || c.modulus_floor <= 0.0 {
            return Err(format!("around {z:?}: winding {}, floor {}", c.winding, c.modulus_floor));
        }
    }
    let b = Box2::new(-0.5, 0.5, -0.5, 0.5).unwrap();
    let c = winding_number(&p, &PolyPath::rectangle(&b), 18)
        .map_err(|e| e.to_string())?
        .certified()
        .ok_or("winding around the central box inconclusive")?;
    if c.winding != 0 || c.modulus_floor < 0.5 {
        return Err(format!("central box: winding {}, floor {}", c.winding, c.modulus_floor));
    }
    let psi = AffineSquareMap::builtin_psi();
    let square = PolyPath::new(psi.corners().to_vec(), true).unwrap();
    let c = winding_number(&p, &square, 18)
        .map_err(|e| e.to_string())?
        .certified()
        .ok_or("winding around the mapped square inconclusive")?;
    if c.winding.abs() != 1 {
        return Err(format!("mapped square winding {}", c.winding));
    }
    let img = psi.apply(0.5, 1.0 / 6.0);
    if (img[0] - Z).hypot(img[1] + Z) > 1e-12 {
        return Err(format!("psi(1/2,1/6) = {img:?} is not the zero"));
    }
    Ok("|winding| = 1 at both zeros and on the mapped square; 0 on the zero-free box".into())
}

fn criterion_7_path_verification() -> Outcome {
    let p = phi();
    let cases = [
        (path_down_then_right(), constraints_down_then_right()),
        (path_right_then_down(), constraints_right_then_down()),
    ];
    for (path, constraints) in cases {
        match verify_path_constraints(&p, &path, &constraints, 12).map_err(|e| e.to_string())? {
            PathVerification::Certified(_) => {}
            PathVerification::Inconclusive { failing_constraint } => {
                return Err(format!("constraint {failing_constraint} inconclusive at depth 12"));
            }
        }
    }
    Ok("all six segment bounds certified at threshold 1/10, depth <= 12".into())
}

fn criterion_8_corollary_slice() -> Outcome {
    let dist = DiscreteDistribution::builtin_mu();
    let embedded = dist.embed(4, &[1, 2]).map_err(|e| e.to_string())?;
    let p = dist.char_poly();
    let q = embedded.char_poly();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut max_dev = 0.0f64;
    for _ in 0..1_000 {
        let t: Vec<f64> = (0..4).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let dev = (q.eval(&t).unwrap() - p.eval(&[t[0], t[1]]).unwrap()).norm();
        max_dev = max_dev.max(dev);
    }
    if max_dev > 1e-12 {
        return Err(format!("slice deviation {max_dev:e} exceeds 1e-12"));
    }
    Ok(format!("max deviation {max_dev:e} at 1000 random 4-dimensional points"))
}

fn criterion_9_containment_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace);
    let mut checks = 0usize;
    while checks < 100_000 {
        let n = rng.gen_range(1..=4);
        let terms = (0..n)
            .map(|_| Term {
                weight: rng.gen_range(-1.0..1.0),
                frequency: vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)],
            })
            .collect();
        let p = TrigPolynomial::new(2, terms).unwrap();
        let cx = rng.gen_range(-8.0..8.0);
        let cy = rng.gen_range(-8.0..8.0);
        let wx = rng.gen_range(0.0..2.0);
        let wy = rng.gen_range(0.0..2.0);
        let b = Box2::new(cx - wx, cx + wx, cy - wy, cy + wy).unwrap();
        let e = enclose(&p, &Region::Rect(b)).unwrap();
        for _ in 0..50 {
            let t = [
                rng.gen_range(b.x.lo()..=b.x.hi()),
                rng.gen_range(b.y.lo()..=b.y.hi()),
            ];
            if !e.contains(p.eval(&t).unwrap()) {
                return Err(format!("containment violated for {p:?} at {t:?}"));
            }
            checks += 1;
        }
    }
    // Sign-certificate soundness: sample inside a certified region.
    let p = phi();
    let seg = Segment::from_points([PI, -PI], [PI, PI]);
    certify_sign(&p, Component::Re, Region::segment(seg), -0.1, Direction::Leq, 10)
        .map_err(|e| e.to_string())?
        .certified()
        .ok_or("edge sign certificate inconclusive")?;
    for _ in 0..10_000 {
        let y = rng.gen_range(-PI..PI);
        if p.eval(&[PI, y]).unwrap().re >= -0.1 {
            return Err(format!("certified inequality violated at y = {y}"));
        }
    }
    Ok(format!("{checks} containment checks and 10000 sign samples, all passed"))
}

fn criterion_10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_zerocert");
    let dir = std::env::temp_dir();
    let out1 = dir.join("acceptance_certs_1.txt");
    let out2 = dir.join("acceptance_certs_2.txt");
    let mut stdouts = Vec::new();
    for out in [&out1, &out2] {
        let res = Command::new(bin)
            .args(["verify-paper", "--out"])
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        if !res.status.success() {
            return Err(format!("verify-paper exited with {:?}", res.status.code()));
        }
        stdouts.push(res.stdout);
    }
    let c1 = std::fs::read(&out1).map_err(|e| e.to_string())?;
    let c2 = std::fs::read(&out2).map_err(|e| e.to_string())?;
    if c1 != c2 {
        return Err("certificate files differ between runs".into());
    }
    if stdouts[0] != stdouts[1] {
        return Err("stdout differs between runs".into());
    }
    if c1.is_empty() {
        return Err("no certificates were written".into());
    }
    Ok(format!("two runs produced byte-identical output ({} certificate bytes)", c1.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("boundary identity", criterion_1_boundary_identity),
        ("anchor memberships", criterion_2_anchor_memberships),
        ("miranda reproduction", criterion_3_miranda_reproduction),
        ("margin bracket", criterion_4_margin_bracket),
        ("zero isolation", criterion_5_zero_isolation),
        ("winding certificates", criterion_6_winding_certificates),
        ("path verification", criterion_7_path_verification),
        ("corollary slice", criterion_8_corollary_slice),
        ("containment suite", criterion_9_containment_suite),
        ("determinism", criterion_10_determinism),
    ];
    let mut failures = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {:2} ({name}): {detail}", i + 1),
            Err(detail) => {
                println!("FAIL criterion {:2} ({name}): {detail}", i + 1);
                failures.push(format!("{name}: {detail}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
