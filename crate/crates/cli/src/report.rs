//! The built-in verification suite behind `verify-paper`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerocert::cert;
use zerocert::charfn::{DiscreteDistribution, TrigPolynomial};
use zerocert::interval::Box2;
use zerocert::miranda::{certified_margin, certify_miranda, AffineSquareMap};
use zerocert::winding::{
    constraints_down_then_right, constraints_right_then_down, path_down_then_right,
    path_right_then_down, verify_path_constraints, winding_number, zero_search, PathVerification,
    PolyPath,
};
use zerocert::Verdict;

/// One named check: a claim, the computed quantity, the bound it must meet,
/// and whether it did.
pub struct Check {
    pub name: &'static str,
    pub computed: String,
    pub expected: &'static str,
    pub pass: bool,
}

/// Ordered list of checks plus the certificates produced along the way.
/// Overall status is pass iff every check passes.
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub certificates: String,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<42} computed {:<26} expected {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.computed,
                c.expected,
            ));
        }
        out.push_str(&format!(
            "overall: {} ({}/{} checks)\n",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
        ));
        out
    }
}

const Z: f64 = 2.0 * PI / 3.0;

fn sci(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Runs every built-in check against the three-atom distribution, optionally
/// with overridden weights, and collects certificates for the ones that
/// certify.
pub fn run(weights: Option<[f64; 3]>, max_depth: usize) -> Result<VerificationReport, zerocert::Error> {
    let dist = match weights {
        None => DiscreteDistribution::builtin_mu(),
        Some(w) => DiscreteDistribution::new(
            2,
            vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            w.to_vec(),
        )?,
    };
    let p = dist.char_poly();
    let psi = AffineSquareMap::builtin_psi();
    let mut checks = Vec::new();
    let mut certs = String::new();

    checks.push(boundary_identity(&p));
    checks.extend(anchors(&p));
    for eps in [0.025, 0.05] {
        let (check, text) = miranda_at(&p, &psi, eps, max_depth);
        checks.push(check);
        certs.push_str(&text);
    }
    checks.push(margin_bracket(&p, &psi, max_depth));
    checks.push(zero_isolation(&p));
    for (i, z) in [[Z, -Z], [-Z, Z]].into_iter().enumerate() {
        let b = Box2::new(z[0] - 0.4, z[0] + 0.4, z[1] - 0.4, z[1] + 0.4).unwrap();
        let (check, text) = winding_check(
            &p,
            &PolyPath::rectangle(&b),
            if i == 0 { "winding around first zero" } else { "winding around second zero" },
            max_depth,
            |w, floor| (w.abs() == 1 && floor > 0.0, "|winding| = 1, floor > 0"),
        );
        checks.push(check);
        certs.push_str(&text);
    }
    let zero_free = Box2::new(-0.5, 0.5, -0.5, 0.5).unwrap();
    let (check, text) = winding_check(
        &p,
        &PolyPath::rectangle(&zero_free),
        "winding around zero-free central box",
        max_depth,
        |w, floor| (w == 0 && floor >= 0.5, "winding = 0, floor >= 0.5"),
    );
    checks.push(check);
    certs.push_str(&text);
    let square = PolyPath::new(psi.corners().to_vec(), true).unwrap();
    let (check, text) = winding_check(&p, &square, "winding around mapped square", max_depth, |w, floor| {
        (w.abs() == 1 && floor > 0.0, "|winding| = 1, floor > 0")
    });
    checks.push(check);
    certs.push_str(&text);
    checks.push(mapped_square_holds_zero(&psi));
    let (check, text) = path_check(
        &p,
        &path_down_then_right(),
        &constraints_down_then_right(),
        "sign bounds along down-then-right path",
        max_depth.min(12),
    );
    checks.push(check);
    certs.push_str(&text);
    let (check, text) = path_check(
        &p,
        &path_right_then_down(),
        &constraints_right_then_down(),
        "sign bounds along right-then-down path",
        max_depth.min(12),
    );
    checks.push(check);
    certs.push_str(&text);
    checks.push(embedding_slice(&dist));

    Ok(VerificationReport { checks, certificates: certs })
}

fn boundary_identity(p: &TrigPolynomial) -> Check {
    // On each of the four lines x = ±π, y = ±π the value is constantly −1/3.
    let mut max_dev = 0.0f64;
    for k in 0..100 {
        let s = -PI + 2.0 * PI * k as f64 / 99.0;
        for t in [[PI, s], [-PI, s], [s, PI], [s, -PI]] {
            let v = p.eval(&t).unwrap();
            let dev = (v.re + 1.0 / 3.0).abs().max(v.im.abs());
            max_dev = max_dev.max(dev);
        }
    }
    Check {
        name: "boundary lines evaluate to -1/3",
        computed: format!("max dev {}", sci(max_dev)),
        expected: "<= 1e-12",
        pass: max_dev <= 1e-12,
    }
}

type Anchor = (&'static str, [f64; 2], fn(num_complex::Complex64) -> f64, f64, &'static str);

fn anchors(p: &TrigPolynomial) -> Vec<Check> {
    let cases: [Anchor; 4] = [
        ("anchor Re(0,0) = 1", [0.0, 0.0], |v| v.re, 1.0, ">= 1/10"),
        ("anchor Re(pi,-pi) = -1/3", [PI, -PI], |v| v.re, -1.0 / 3.0, "<= -1/10"),
        ("anchor Im(pi/2,pi/2) = 2/3", [PI / 2.0, PI / 2.0], |v| v.im, 2.0 / 3.0, ">= 1/10"),
        ("anchor Im(-pi/2,-pi/2) = -2/3", [-PI / 2.0, -PI / 2.0], |v| v.im, -2.0 / 3.0, "<= -1/10"),
    ];
    cases
        .into_iter()
        .map(|(name, t, pick, target, side)| {
            let got = pick(p.eval(&t).unwrap());
            let dev = (got - target).abs();
            let side_ok = if side.starts_with(">=") { got >= 0.1 } else { got <= -0.1 };
            Check {
                name,
                computed: sci(got),
                expected: side,
                pass: dev <= 1e-12 && side_ok,
            }
        })
        .collect()
}

fn miranda_at(
    p: &TrigPolynomial,
    psi: &AffineSquareMap,
    eps: f64,
    max_depth: usize,
) -> (Check, String) {
    let name: &'static str = if eps == 0.025 {
        "robust zero at margin 0.025"
    } else {
        "robust zero at margin 0.05"
    };
    match certify_miranda(p, psi, eps, max_depth) {
        Ok(Verdict::Certified(c)) => {
            let text = cert::write_miranda(p, &c);
            (
                Check {
                    name,
                    computed: format!("orientation {}", c.orientation.name()),
                    expected: "certificate",
                    pass: true,
                },
                text,
            )
        }
        Ok(Verdict::Inconclusive) => (
            Check { name, computed: "inconclusive".into(), expected: "certificate", pass: false },
            String::new(),
        ),
        Err(e) => (
            Check { name, computed: format!("error: {e}"), expected: "certificate", pass: false },
            String::new(),
        ),
    }
}

fn margin_bracket(p: &TrigPolynomial, psi: &AffineSquareMap, max_depth: usize) -> Check {
    match certified_margin(p, psi, max_depth) {
        Ok(m) => Check {
            name: "largest certified margin",
            computed: sci(m),
            expected: "in [0.050, 0.056]",
            pass: (0.050..=0.056).contains(&m),
        },
        Err(e) => Check {
            name: "largest certified margin",
            computed: format!("error: {e}"),
            expected: "in [0.050, 0.056]",
            pass: false,
        },
    }
}

fn zero_isolation(p: &TrigPolynomial) -> Check {
    let b = Box2::new(-PI, PI, -PI, PI).unwrap();
    let name = "zero clusters in the fundamental box";
    match zero_search(p, &b, 1e-6) {
        Ok(clusters) => {
            let mut ok = clusters.len() == 2;
            if ok {
                for (c, z) in clusters.iter().zip([[-Z, Z], [Z, -Z]]) {
                    let d = (c.center()[0] - z[0]).hypot(c.center()[1] - z[1]);
                    ok &= d <= 1e-6;
                }
            }
            Check {
                name,
                computed: format!("{} clusters", clusters.len()),
                expected: "2, each within 1e-6 of +-(2pi/3, -2pi/3)",
                pass: ok,
            }
        }
        Err(e) => Check {
            name,
            computed: format!("error: {e}"),
            expected: "2 clusters",
            pass: false,
        },
    }
}

fn winding_check(
    p: &TrigPolynomial,
    path: &PolyPath,
    name: &'static str,
    max_depth: usize,
    judge: fn(i64, f64) -> (bool, &'static str),
) -> (Check, String) {
    match winding_number(p, path, max_depth) {
        Ok(Verdict::Certified(c)) => {
            let (pass, expected) = judge(c.winding, c.modulus_floor);
            let text = cert::write_winding(p, &c);
            (
                Check {
                    name,
                    computed: format!("winding {}, floor {}", c.winding, sci(c.modulus_floor)),
                    expected,
                    pass,
                },
                text,
            )
        }
        Ok(Verdict::Inconclusive) => (
            Check { name, computed: "inconclusive".into(), expected: "certificate", pass: false },
            String::new(),
        ),
        Err(e) => (
            Check { name, computed: format!("error: {e}"), expected: "certificate", pass: false },
            String::new(),
        ),
    }
}

fn mapped_square_holds_zero(psi: &AffineSquareMap) -> Check {
    // ψ(1/2, 1/6) is exactly the first zero, so the zero lies in the square.
    let img = psi.apply(0.5, 1.0 / 6.0);
    let dev = (img[0] - Z).hypot(img[1] + Z);
    Check {
        name: "mapped square contains the first zero",
        computed: format!("psi(1/2,1/6) off by {}", sci(dev)),
        expected: "<= 1e-12",
        pass: dev <= 1e-12,
    }
}

fn path_check(
    p: &TrigPolynomial,
    path: &PolyPath,
    constraints: &[zerocert::winding::PathConstraint],
    name: &'static str,
    max_depth: usize,
) -> (Check, String) {
    match verify_path_constraints(p, path, constraints, max_depth) {
        Ok(PathVerification::Certified(certs)) => {
            let text: String = certs.iter().map(|c| cert::write_sign(p, c)).collect();
            (
                Check {
                    name,
                    computed: format!("{} constraints certified", constraints.len()),
                    expected: "all certified",
                    pass: true,
                },
                text,
            )
        }
        Ok(PathVerification::Inconclusive { failing_constraint }) => (
            Check {
                name,
                computed: format!("constraint {failing_constraint} inconclusive"),
                expected: "all certified",
                pass: false,
            },
            String::new(),
        ),
        Err(e) => (
            Check { name, computed: format!("error: {e}"), expected: "all certified", pass: false },
            String::new(),
        ),
    }
}

fn embedding_slice(dist: &DiscreteDistribution) -> Check {
    let name = "four-dimensional embedding slices to the plane";
    let embedded = match dist.embed(4, &[1, 2]) {
        Ok(d) => d,
        Err(e) => {
            return Check {
                name,
                computed: format!("error: {e}"),
                expected: "<= 1e-12",
                pass: false,
            }
        }
    };
    let p = dist.char_poly();
    let q = embedded.char_poly();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_dev = 0.0f64;
    for _ in 0..1_000 {
        let t: Vec<f64> = (0..4).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let lhs = q.eval(&t).unwrap();
        let rhs = p.eval(&[t[0], t[1]]).unwrap();
        max_dev = max_dev.max((lhs - rhs).norm());
    }
    Check {
        name,
        computed: format!("max dev {}", sci(max_dev)),
        expected: "<= 1e-12",
        pass: max_dev <= 1e-12,
    }
}
