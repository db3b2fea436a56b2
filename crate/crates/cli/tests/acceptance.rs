//! Acceptance suite: every criterion runs exactly (no tolerances) and
//! prints one pass/fail line. Run with `cargo test --test acceptance --
//! --nocapture` to see the lines.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric::curves::{curve_from_c, minimal_c};
use toric::exactlin::{
    dot, dual_kernel_generators, gale_dual, nstar_image, rat, rat_int, same_span,
    smith_normal_form, FgAbelianGroup, IntMatrix, LatticeMap, Rat, RatVector,
};
use toric::extension::{enumerate_for_cone, shift_lambda, SExtension};
use toric::fan::{affine_quotient, football, weighted_projective, StackyFan};
use toric::ifun::{iseries, APerturbation, SeriesKey};
use toric::linform::FactoredExpr;
use toric::verify::{
    check_c1, check_c2, check_restriction, recursion_coefficient, verify_all, CheckSelection,
    FaultInjection,
};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn report(criterion: usize, name: &str, start: Instant, pass: bool) {
    println!(
        "ACCEPTANCE {criterion} {name}: {} ({} ms)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_millis()
    );
    assert!(pass, "acceptance criterion {criterion} ({name}) failed");
}

fn all_ones(fan: &StackyFan) -> RatVector {
    vec![rat_int(1); fan.n_rays()]
}

fn nonzero_boxes(fan: &StackyFan) -> Vec<Vec<BigInt>> {
    fan.box_all()
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.element.clone())
        .collect()
}

/// The corpus: (fan, C2 cutoff).
fn corpus() -> Vec<(StackyFan, Rat)> {
    vec![
        (weighted_projective(&[1, 1]).unwrap(), rat_int(4)),
        (weighted_projective(&[1, 2]).unwrap(), rat_int(4)),
        (weighted_projective(&[1, 1, 2]).unwrap(), rat_int(3)),
        (football(2, 3).unwrap(), rat_int(3)),
    ]
}

fn extensions_of(fan: &StackyFan) -> Vec<SExtension> {
    let mut out = vec![SExtension::empty()];
    let boxes = nonzero_boxes(fan);
    if !boxes.is_empty() {
        out.push(SExtension::new(fan, boxes).unwrap());
    }
    out
}

#[test]
fn criterion_1_c2_residue_recursion() {
    let start = Instant::now();
    let mut pass = true;
    for (fan, cutoff) in corpus() {
        let omega = all_ones(&fan);
        for ext in extensions_of(&fan) {
            let selection = CheckSelection {
                c1: false,
                c2: true,
                restriction: false,
            };
            let rep = verify_all(&fan, &ext, &omega, &cutoff, 2, &selection).unwrap();
            if !rep.all_passed() {
                eprintln!("{}", rep.render_lines().join("\n"));
                pass = false;
            }
        }
    }
    report(1, "c2-residue-recursion", start, pass);
}

#[test]
fn criterion_2_c1_pole_classification() {
    let start = Instant::now();
    let mut pass = true;
    for (fan, cutoff) in corpus() {
        let omega = all_ones(&fan);
        for ext in extensions_of(&fan) {
            for sigma in 0..fan.max_cones().len() {
                let s = iseries(&fan, &ext, sigma, &omega, &cutoff, 1).unwrap();
                for b in fan.box_elements(fan.max_cone(sigma), true).unwrap() {
                    let rep = check_c1(&fan, &ext, sigma, &b, &s);
                    if !rep.all_passed() {
                        eprintln!("{}", rep.render_lines().join("\n"));
                        pass = false;
                    }
                }
            }
        }
    }
    // The affine quotient [C^2/mu_3] has no chi-involving denominators.
    let affine = affine_quotient(vec![vec![bi(1), bi(0)], vec![bi(1), bi(3)]]).unwrap();
    let ext = SExtension::new(&affine, nonzero_boxes(&affine)).unwrap();
    let omega = all_ones(&affine);
    let s = iseries(&affine, &ext, 0, &omega, &rat_int(3), 1).unwrap();
    for coeff in s.coeffs.values() {
        for (form, exp) in coeff.factors() {
            if exp < 0 && form.chi_coeffs().iter().any(|c| !c.is_zero()) {
                eprintln!("affine coefficient has chi pole: {}", coeff.render());
                pass = false;
            }
        }
    }
    for b in affine.box_elements(affine.max_cone(0), true).unwrap() {
        let rep = check_c1(&affine, &ext, 0, &b, &s);
        if !rep.all_passed() {
            pass = false;
        }
    }
    report(2, "c1-pole-classification", start, pass);
}

#[test]
fn criterion_3_restriction_identity() {
    let start = Instant::now();
    let mut pass = true;
    let clean = FaultInjection::default();
    for (fan, _) in corpus() {
        let omega = all_ones(&fan);
        for ext in extensions_of(&fan) {
            for sigma in 0..fan.max_cones().len() {
                let rep =
                    check_restriction(&fan, &ext, sigma, &omega, &rat_int(3), 1, &clean);
                if !rep.all_passed() {
                    eprintln!("{}", rep.render_lines().join("\n"));
                    pass = false;
                }
            }
        }
    }
    report(3, "restriction-identity", start, pass);
}

#[test]
fn criterion_4_wall_identities() {
    let start = Instant::now();
    let mut pass = true;
    for (fan, _) in corpus() {
        for wall in fan.adjacent_pairs() {
            let ws = fan.fixed_point_weights(wall.sigma);
            let ws_p = fan.fixed_point_weights(wall.sigma_p);
            let uj = ws.weight(wall.j);
            for b in fan.box_elements(fan.max_cone(wall.sigma), true).unwrap() {
                let c = minimal_c(&fan, wall, &b);
                let curve = curve_from_c(&fan, wall, &b, &c).unwrap();
                // Lemma: u_i(sigma) = u_i(sigma') + (c_i/c) u_j(sigma).
                for i in 0..fan.n_rays() {
                    let ratio = &curve.degree[i] / &curve.c;
                    for t in 0..fan.dim() {
                        let rhs = &ws_p.weight(i)[t] + &ratio * &uj[t];
                        if ws.weight(i)[t] != rhs {
                            eprintln!("wall identity fails at i = {i}");
                            pass = false;
                        }
                    }
                }
                // Opposite weights: u_j(sigma)/c = -u_j'(sigma')/c'.
                let ujp = ws_p.weight(wall.j_p);
                for t in 0..fan.dim() {
                    if &uj[t] / &curve.c != -&ujp[t] / &curve.c_p {
                        eprintln!("opposite-weight identity fails");
                        pass = false;
                    }
                }
            }
        }
    }
    report(4, "wall-identities", start, pass);
}

#[test]
fn criterion_5_degree_shift_bijection() {
    let start = Instant::now();
    let mut pass = true;
    let cutoff = rat_int(3);
    for (fan, _) in corpus() {
        let omega = all_ones(&fan);
        for ext in extensions_of(&fan) {
            for wall in fan.adjacent_pairs() {
                for b in fan.box_elements(fan.max_cone(wall.sigma), true).unwrap() {
                    let mut c = minimal_c(&fan, wall, &b);
                    loop {
                        let curve = curve_from_c(&fan, wall, &b, &c).unwrap();
                        let omega_l = dot(&omega, &curve.degree);
                        if omega_l > cutoff {
                            break;
                        }
                        // Effectivity guard: the shifted degree lies in
                        // the sigma parameterization only when its j'
                        // coordinate stays nonnegative.
                        let mut lhs: Vec<RatVector> =
                            enumerate_for_cone(&fan, &ext, wall.sigma_p, &omega, &cutoff)
                                .unwrap()
                                .into_iter()
                                .filter(|d| d.box_elem.element == curve.b_p.element)
                                .map(|d| {
                                    shift_lambda(&fan, &ext, &omega, &d, &curve)
                                        .unwrap()
                                        .lambda
                                })
                                .filter(|l| !l[wall.j_p].is_negative())
                                .collect();
                        lhs.sort();
                        let big = &cutoff + &omega_l;
                        let mut rhs: Vec<RatVector> =
                            enumerate_for_cone(&fan, &ext, wall.sigma, &omega, &big)
                                .unwrap()
                                .into_iter()
                                .filter(|d| {
                                    d.box_elem.element == b.element
                                        && d.lambda[wall.j] >= curve.c
                                })
                                .map(|d| d.lambda)
                                .collect();
                        rhs.sort();
                        if lhs != rhs {
                            eprintln!(
                                "shift bijection fails: wall {}>{} b={} c={}",
                                wall.sigma,
                                wall.sigma_p,
                                b.label(),
                                c
                            );
                            pass = false;
                        }
                        c = &c + Rat::one();
                    }
                }
            }
        }
    }
    report(5, "degree-shift-bijection", start, pass);
}

#[test]
fn criterion_6_anchor_values() {
    let start = Instant::now();
    let mut pass = true;

    // Kernel (3, 2) for football(2, 3).
    let fb = football(2, 3).unwrap();
    let mut kv = fb.kernel_matrix().col(0);
    if kv[0].is_negative() {
        kv = kv.iter().map(|x| -x).collect();
    }
    pass &= kv == vec![bi(3), bi(2)];

    // RC anchors.
    let p1 = weighted_projective(&[1, 1]).unwrap();
    let w01 = p1.wall_between(0, 1).unwrap().clone();
    let rc_p1 = recursion_coefficient(&p1, &w01, &p1.zero_box(), &rat_int(1)).unwrap();
    let mut minus_inv_chi = FactoredExpr::from_scalar(rat_int(-1));
    minus_inv_chi
        .mul_raw_factor(&[rat_int(1)], &rat_int(0), -1)
        .unwrap();
    pass &= rc_p1 == minus_inv_chi;

    let p12 = weighted_projective(&[1, 2]).unwrap();
    let rc_a = recursion_coefficient(
        &p12,
        &p12.wall_between(0, 1).unwrap().clone(),
        &p12.zero_box(),
        &rat_int(1),
    )
    .unwrap();
    pass &= rc_a == FactoredExpr::from_scalar(rat_int(1));
    let rc_b = recursion_coefficient(
        &p12,
        &p12.wall_between(1, 0).unwrap().clone(),
        &p12.zero_box(),
        &rat_int(1),
    )
    .unwrap();
    let mut two_over_chi2 = FactoredExpr::from_scalar(rat_int(2));
    two_over_chi2
        .mul_raw_factor(&[rat_int(1)], &rat_int(0), -2)
        .unwrap();
    pass &= rc_b == two_over_chi2;

    // P^1 I-coefficients z, 1/(x+z), 1/(2z(x+z)(x+2z)) at omega = (1,0).
    let ext = SExtension::empty();
    let omega = vec![rat_int(1), rat_int(0)];
    let s = iseries(&p1, &ext, 0, &omega, &rat_int(2), 1).unwrap();
    let key = |t: i64| SeriesKey {
        box_elem: vec![bi(0)],
        d: vec![rat_int(t), rat_int(t)],
        k: vec![],
    };
    let mut z_expr = FactoredExpr::one();
    z_expr.mul_raw_factor(&[rat_int(0)], &rat_int(1), 1).unwrap();
    pass &= s.get(&key(0)) == Some(&z_expr);
    let inv_xz = FactoredExpr::normalize(rat_int(1), &[(vec![rat_int(1)], rat_int(1), -1)]).unwrap();
    pass &= s.get(&key(1)) == Some(&inv_xz);
    let deg2 = FactoredExpr::normalize(
        rat(1, 2),
        &[
            (vec![rat_int(0)], rat_int(1), -1),
            (vec![rat_int(1)], rat_int(1), -1),
            (vec![rat_int(1)], rat_int(2), -1),
        ],
    )
    .unwrap();
    pass &= s.get(&key(2)) == Some(&deg2);

    // Residue identity value 1 = (-1/x)(-x) at c = 1.
    let lhs = s.coeffs[&key(1)]
        .residue_at(&[rat_int(1)], &rat_int(1))
        .unwrap();
    let s1 = iseries(&p1, &ext, 1, &omega, &rat_int(2), 1).unwrap();
    let rhs = rc_p1.mul(&s1.coeffs[&key(0)].substitute_z(&[rat_int(-1)]).unwrap());
    pass &= lhs == FactoredExpr::from_scalar(rat_int(1)) && rhs == lhs;

    report(6, "anchor-values", start, pass);
}

#[test]
fn criterion_7_negative_controls() {
    let start = Instant::now();
    let mut pass = true;
    let fan = weighted_projective(&[1, 1]).unwrap();
    let ext = SExtension::empty();
    let omega = vec![rat_int(1), rat_int(0)];
    let cutoff = rat_int(3);
    let s0 = iseries(&fan, &ext, 0, &omega, &cutoff, 1).unwrap();
    let s1 = iseries(&fan, &ext, 1, &omega, &cutoff, 1).unwrap();
    let wall = fan.wall_between(0, 1).unwrap().clone();
    let b = fan.zero_box();
    let faults = [
        FaultInjection {
            rc_scale: Some(rat_int(2)),
            ..Default::default()
        },
        FaultInjection {
            rc_scale: Some(rat_int(-1)),
            ..Default::default()
        },
    ];
    for fault in &faults {
        let rep = check_c2(&fan, &ext, &wall, &b, &s0, &s1, &omega, &cutoff, fault);
        if rep.all_passed() {
            eprintln!("tampered C2 unexpectedly passed: {fault:?}");
            pass = false;
        }
    }
    let tweak = FaultInjection {
        a_perturb: APerturbation {
            tweak: Some((1, 0, rat_int(2))),
        },
        ..Default::default()
    };
    let rep = check_restriction(&fan, &ext, 0, &omega, &cutoff, 1, &tweak);
    if rep.all_passed() {
        eprintln!("perturbed a_(ij) unexpectedly passed");
        pass = false;
    }
    report(7, "negative-controls", start, pass);
}

#[test]
fn criterion_8_exactlin_property_suite() {
    let start = Instant::now();
    let mut pass = true;

    // 200 random 3x4 SNF instances vs the gcd-of-minors oracle.
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(n, k, i + 1, cur, out);
                    cur.pop();
                }
            }
            rec(n, k, 0, &mut Vec::new(), &mut out);
            out
        }
        let mut g = BigInt::zero();
        for rows in combos(m.rows(), k) {
            for cols in combos(m.cols(), k) {
                let sub = IntMatrix::from_fn(k, k, |i, j| m.get(rows[i], cols[j]).clone());
                g = g.gcd(&sub.determinant());
            }
        }
        g
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_97ed);
    for _ in 0..200 {
        let entries: Vec<BigInt> = (0..12).map(|_| bi(rng.gen_range(-9..=9))).collect();
        let m = IntMatrix::from_fn(3, 4, |i, j| entries[i * 4 + j].clone());
        let snf = smith_normal_form(&m);
        pass &= snf.u.mul(&m).mul(&snf.v) == snf.d;
        pass &= snf.u.determinant().abs().is_one() && snf.v.determinant().abs().is_one();
        let mut prod = BigInt::one();
        for (k, dk) in snf.diag().iter().enumerate() {
            prod *= dk;
            pass &= prod == minor_gcd(&m, k + 1);
        }
    }

    // Gale-dual exactness on 20 random valid rho.
    let mut done = 0;
    while done < 20 {
        let rank = rng.gen_range(1..=2usize);
        let torsion: Vec<BigInt> = match rng.gen_range(0..4) {
            0 => vec![],
            1 => vec![bi(2)],
            2 => vec![bi(3)],
            _ => vec![bi(2), bi(4)],
        };
        let group = FgAbelianGroup::new(rank, torsion).unwrap();
        let n = rank + rng.gen_range(1..=2usize);
        let cols: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..group.dim()).map(|_| bi(rng.gen_range(-4..=4))).collect())
            .collect();
        let rho = LatticeMap::from_free(group.clone(), cols);
        let Ok((ldual, rho_dual)) = gale_dual(&rho) else {
            continue;
        };
        pass &= ldual.rank() == n - rank;
        pass &= same_span(&dual_kernel_generators(&rho_dual), &nstar_image(&rho));
        done += 1;
    }
    report(8, "exactlin-property-suite", start, pass);
}

#[test]
fn criterion_9_golden_byte_identity() {
    let start = Instant::now();
    let mut pass = true;
    let run = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_toric"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let cases: [(&str, &[&str]); 3] = [
        (
            "p1_cutoff3.txt",
            &["example", "p1", "--", "ifunction", "--cutoff", "3"],
        ),
        (
            "wp12_cutoff3.txt",
            &["example", "wp", "1", "2", "--", "ifunction", "--cutoff", "3"],
        ),
        (
            "football23_cutoff2.txt",
            &[
                "example", "football", "2", "3", "--", "ifunction", "--cutoff", "2",
            ],
        ),
    ];
    for (golden, args) in cases {
        let expect = std::fs::read(format!(
            "{}/tests/golden/{golden}",
            env!("CARGO_MANIFEST_DIR")
        ))
        .expect("golden file");
        let first = run(args);
        let second = run(args);
        let mut jobs1: Vec<&str> = args.to_vec();
        jobs1.extend(["--jobs", "1"]);
        let mut jobs4: Vec<&str> = args.to_vec();
        jobs4.extend(["--jobs", "4"]);
        let j1 = run(&jobs1);
        let j4 = run(&jobs4);
        pass &= first.stdout == expect;
        pass &= second.stdout == expect;
        pass &= j1.stdout == expect;
        pass &= j4.stdout == expect;
        if !pass {
            eprintln!("byte identity failed for {golden}");
        }
    }
    report(9, "golden-byte-identity", start, pass);
}
