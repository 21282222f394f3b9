//! Acceptance checks, one line per criterion.
//!
//! A criterion listed in `KNOWN_RED` is reported as FAIL with its reason and
//! does not fail the run; any other failure exits nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbert_core::analysis::{self, NewtonResult};
use hilbert_core::catalog;
use hilbert_core::hilbert::{max_perturbation, not_sos_certificate, psd_audit, Certificate, SearchConfig};
use hilbert_core::interp;
use hilbert_core::pointideal::{
    forced_zeros, gap_element, phi_psi, vanishing_basis, ForcedPoint, Mode, PointSet,
};
use hilbert_core::rational::{int, rat, to_f64, from_f64_snapshot};
use hilbert_core::upoly::UPoly;
use hilbert_core::Poly;

const KNOWN_RED: &[(u32, &str)] = &[(
    5,
    "the stated sextic 729x^6 - 22518x^4 + 182774x^2 - 111392 has its positive root at 0.8138434, \
     outside the certified enclosure of 2 sigma(1,0) = 0.8139227; the exact minimal polynomial has \
     182744 in place of 182774 and its root lies inside the enclosure",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn xyz(s: &str) -> Poly {
    Poly::parse(s, &["x", "y", "z"]).unwrap()
}

fn xy(s: &str) -> Poly {
    Poly::parse(s, &["x", "y"]).unwrap()
}

fn identities() -> Outcome {
    let required = [
        "robinson_tilde_substitution",
        "seven_point_quartic_of_cubics",
        "truncated_quadratic_psd",
        "seven_point_T_multiplier",
        "binary_sextic_on_curve",
        "robinson_family_multiplier",
        "p_t_multiplier",
        "cyclic_ratio_relation",
        "m_t_multiplier",
        "s_t_multiplier",
        "robinson_weighted_multiplier",
        "multiplier_block_discriminant",
    ];
    let checks: Vec<_> = catalog::identities().iter().map(|i| catalog::check_identity(i).unwrap()).collect();
    let missing: Vec<&str> = required
        .iter()
        .filter(|r| !checks.iter().any(|c| &c.name == *r))
        .copied()
        .collect();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    ok(
        missing.is_empty() && failed.is_empty(),
        format!("{} identities, missing {missing:?}, nonzero residual {failed:?}", checks.len()),
    )
}

fn robinson_points() -> PointSet {
    PointSet::from_ints(
        Mode::Affine,
        &[&[-1, -1], &[-1, 0], &[-1, 1], &[0, -1], &[0, 1], &[1, -1], &[1, 0], &[1, 1]],
    )
    .unwrap()
}

fn robinson_pipeline() -> Outcome {
    let a = robinson_points();
    let b = vanishing_basis(&a, 3, 1).unwrap();
    let span = b.dim() == 2 && b.same_span(&[xy("x^3 - x"), xy("y^3 - y")]);
    let singular = vanishing_basis(&a, 6, 2).unwrap().dim();
    let forced = forced_zeros(&b).unwrap();
    let origin = forced.count() == 1
        && matches!(forced.all().next(), Some(ForcedPoint::Rational { coords, .. }) if coords == &vec![int(0), int(0)]);
    let cert = not_sos_certificate(&catalog::form("robinson", &[]).unwrap(), &a, 3).unwrap();
    let witness = match &cert {
        Certificate::NotSos(w) => {
            let span = hilbert_core::pointideal::product_span(&b).unwrap();
            w.verify(&span.products, &xy("x^6 + y^6 + 1 - x^4 y^2 - x^2 y^4 - x^4 - y^4 - x^2 - y^2 + 3 x^2 y^2"))
        }
        Certificate::InSpan { .. } => false,
    };
    ok(
        span && singular == 4 && origin && witness,
        format!("basis span {span}, singular dim {singular}, forced origin {origin}, witness {witness}"),
    )
}

fn seven_point_pipeline() -> Outcome {
    let a = PointSet::from_ints(
        Mode::Projective,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1]],
    )
    .unwrap();
    let b = vanishing_basis(&a, 3, 1).unwrap();
    let fs = [xyz("x (y^2 - z^2)"), xyz("y (z^2 - x^2)"), xyz("z (x^2 - y^2)")];
    let span = b.dim() == 3 && b.same_span(&fs);
    let forced = forced_zeros(&b).map(|f| f.count());
    let gap = gap_element(&a, 3).unwrap().is_some();
    let two_s = catalog::form("P_c", &[int(1)]).unwrap() == catalog::form("choi_lam_s", &[]).unwrap().scale(&int(2));
    ok(
        span && forced == Ok(0) && gap && two_s,
        format!("basis span {span}, forced {forced:?}, gap {gap}, P_1 = 2S {two_s}"),
    )
}

fn example_nine_points() -> Outcome {
    let a = PointSet::from_ints(
        Mode::Affine,
        &[&[-1, 0], &[-1, -1], &[0, 1], &[0, -1], &[1, 0], &[2, 2], &[2, -2], &[1, -3]],
    )
    .unwrap();
    let b = vanishing_basis(&a, 3, 1).unwrap();
    let f1 = xy("-42 + 49 x + 42 x^2 - 49 x^3 - 20 y - 38 x y + 4 x^2 y + 42 y^2 + 20 y^3");
    let f2 = xy("-22 + 31 x + 22 x^2 - 31 x^3 - 12 y - 18 x y + 22 y^2 + 4 x y^2 + 12 y^3");
    let span = b.same_span(&[f1, f2]);
    let ninth = vec![rat(2516, 1297), rat(4991, 2594)];
    let forced = forced_zeros(&b).unwrap();
    let exact = forced.count() == 1
        && matches!(forced.all().next(), Some(ForcedPoint::Rational { coords, .. }) if coords == &ninth);
    let mut nine = a.points().to_vec();
    nine.push(ninth);
    let a9 = PointSet::affine(nine).unwrap();
    let pp = phi_psi(&a9, &[0, 1, 2, 3, 4], &[5, 6, 7], 8).unwrap();
    let phi = pp.phi.is_proportional_to(&xy("x^2 - x y + y^2 - 1"));
    let psi = pp.psi.is_proportional_to(&xy(
        "-6136 + 2924 x + 5784 x^2 - 2924 x^3 + 352 x^4 - 2804 y - 7000 x y + 6299 x^2 y - 1049 x^3 y \
         + 5818 y^2 - 7803 x y^2 + 1811 x^2 y^2 + 2804 y^3 - 1402 x y^3 + 318 y^4",
    ));
    ok(
        span && exact && phi && psi,
        format!("basis span {span}, forced zero (2516/1297, 4991/2594) {exact}, phi {phi}, psi {psi}"),
    )
}

fn sigma_value() -> Outcome {
    let s = analysis::sigma(&int(1), &int(0), &rat(1, 1_000_000_000_000)).unwrap();
    let two = s.sigma.scale(&int(2));
    let within = two.lo >= rat(81382, 100_000) && two.hi <= rat(81402, 100_000);
    let brackets = |p: &UPoly| p.eval(&two.lo).is_negative() != p.eval(&two.hi).is_negative();
    let stated = brackets(&UPoly::from_ints(&[-111392, 0, 182774, 0, -22518, 0, 729]));
    let corrected = brackets(&UPoly::from_ints(&[-111392, 0, 182744, 0, -22518, 0, 729]));
    ok(
        within && stated,
        format!(
            "2 sigma in [{:.9}, {:.9}], within [0.81382, 0.81402] {within}, brackets stated sextic root {stated}, \
             brackets corrected sextic root {corrected}",
            to_f64(&two.lo),
            to_f64(&two.hi)
        ),
    )
}

fn perturbation_targets() -> Outcome {
    let cfg = SearchConfig::default();
    let f = xyz("(x^3 - x z^2)^2 + (y^3 - y z^2)^2");
    let g = xyz("(x^2 - z^2) (y^2 - z^2) (z^2 - x^2 - y^2)");
    let rob_cfg = SearchConfig {
        anchors: catalog::listed_zeros("Phi", &[int(0), int(0), int(0), int(1)]).unwrap(),
        ..cfg.clone()
    };
    let t = Instant::now();
    let rob = max_perturbation(&f, &g, &rob_cfg).unwrap().c_max_estimate;
    let rob_time = t.elapsed();

    let u0 = catalog::form("U_c", &[int(0)]).unwrap();
    let gu = xyz("x y z (x - y) (y - z) (z - x)");
    let u_cfg = SearchConfig {
        anchors: catalog::listed_zeros("U_c", &[int(0)]).unwrap(),
        ..cfg.clone()
    };
    let t = Instant::now();
    let u = max_perturbation(&u0, &gu, &u_cfg).unwrap().c_max_estimate;
    let u_time = t.elapsed();
    let u_target = 4.0 * (2f64.sqrt() - 1.0).sqrt();

    let t = Instant::now();
    let gon = interp::gondola_max_c(3, &cfg).unwrap().c_max_estimate;
    let gon_time = t.elapsed();

    let minute = Duration::from_secs(60);
    let pass = (rob - 1.0).abs() <= 0.02
        && (u - u_target).abs() <= 0.01 * u_target
        && (gon - 4.0 / 3.0).abs() <= 0.02 * 4.0 / 3.0
        && rob_time < minute
        && u_time < minute
        && gon_time < minute;
    ok(
        pass,
        format!(
            "robinson {rob:.6} ({rob_time:.2?}), U {u:.6} vs {u_target:.6} ({u_time:.2?}), gondola {gon:.6} ({gon_time:.2?})"
        ),
    )
}

fn newton() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, want_witness) in [("motzkin", true), ("choi_lam_s", true), ("robinson", false)] {
        let t = Instant::now();
        let r = analysis::newton_not_sos(&catalog::form(name, &[]).unwrap()).unwrap();
        let dt = t.elapsed();
        let good = match (&r, want_witness) {
            (NewtonResult::Witness { target, candidate, .. }, true) => {
                target == &vec![2, 2, 2] && candidate == &vec![1, 1, 1]
            }
            (NewtonResult::Inconclusive { .. }, false) => true,
            _ => false,
        };
        pass &= good && dt < Duration::from_secs(1);
        detail.push(format!("{name} {} ({dt:.2?})", if want_witness { "witness" } else { "inconclusive" }));
    }
    ok(pass, detail.join(", "))
}

fn biermann() -> Outcome {
    let delta = (1..=8).all(|d| interp::delta_property(d).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut interp_ok = true;
    for k in 0..20 {
        let d = 1 + (k % 6) as u32;
        let mut p = Poly::zero(2);
        for m in hilbert_core::Monomial::all_up_to_degree(2, d) {
            p.add_term(m, rat(rng.gen_range(-20..=20), rng.gen_range(1..=7)));
        }
        interp_ok &= interp::interpolate(&p, d).unwrap() == p;
    }
    ok(delta && interp_ok, format!("delta property d <= 8 {delta}, interpolation on 20 polynomials {interp_ok}"))
}

fn zero_catalogs() -> Outcome {
    let mut pass = true;
    let mut counts = Vec::new();
    for t in [rat(1, 2), int(2), int(3)] {
        let z = catalog::known_zeros("R_t", &[t]);
        pass &= z.as_ref().map(|z| z.len() == 10).unwrap_or(false);
        counts.push(z.map(|z| z.len()).unwrap_or(0));
    }
    let m = catalog::known_zeros("motzkin", &[]).map(|z| z.len());
    let r = catalog::known_zeros("robinson", &[]).map(|z| z.len());
    pass &= m == Ok(6) && r == Ok(10);
    ok(pass, format!("R_t zeros {counts:?}, M {m:?}, R {r:?}"))
}

fn triangle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut agree = 0;
    for _ in 0..1000 {
        let q = |rng: &mut ChaCha8Rng| rat(rng.gen_range(0..=40), rng.gen_range(1..=8));
        let (r, s, t) = (q(&mut rng), q(&mut rng), q(&mut rng));
        let tri = r <= &s + &t && s <= &r + &t && t <= &r + &s;
        if analysis::robinson_multiplier(&r, &s, &t).unwrap().feasible == tri {
            agree += 1;
        }
    }
    let identity = catalog::verify_identity("multiplier_block_discriminant").unwrap().pass;
    ok(agree == 1000 && identity, format!("{agree}/1000 agree, symbolic discriminant identity {identity}"))
}

fn region() -> Outcome {
    let tol = 1e-9;
    let mut disagreements = 0;
    let mut checked = 0;
    for i in 0..20 {
        let r = 0.25 + 0.25 * i as f64;
        let gamma = (2.0 + 9.0 * r + 2.0 * (1.0 + 3.0 * r).powf(1.5)) / (27.0 * r * r);
        for j in 0..20 {
            let offset = (j as f64 - 9.5) / 9.5 * 0.2 * gamma;
            let (rq, sq) = (from_f64_snapshot(r, 1000), from_f64_snapshot(gamma + offset, 1_000_000));
            let inside = analysis::in_region_k(&rq, &sq);
            let audit = psd_audit(&analysis::binary_sextic(&rq, &sq), 20_000, tol, 0).unwrap();
            let decisive = audit.min_value.abs() > tol;
            if decisive && inside == (audit.min_value < 0.0) {
                disagreements += 1;
            }
            checked += 1;
        }
    }
    ok(disagreements == 0, format!("{checked} grid points, {disagreements} disagreements"))
}

fn motzkin_boundary() -> Outcome {
    let half = catalog::form("M_t", &[rat(1, 2)]).unwrap();
    let square = half.sqrt().map(|r| &r * &r == half).unwrap_or(false);
    let audit = psd_audit(&catalog::form("M_t", &[rat(3, 5)]).unwrap(), 200_000, 1e-9, 0).unwrap();
    let neg = audit.found_negative();
    ok(square && neg, format!("square at t^2 = 1/2 {square}, negative at t^2 = 3/5 {neg} (min {:.3e})", audit.min_value))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> Outcome, Option<Duration>)> = vec![
        (1, "exact identity suite", identities, Some(Duration::from_secs(10))),
        (2, "Robinson pipeline", robinson_pipeline, None),
        (3, "seven-point pipeline", seven_point_pipeline, None),
        (4, "nine-point example", example_nine_points, None),
        (5, "sigma(1,0) enclosure", sigma_value, Some(Duration::from_secs(1))),
        (6, "numeric perturbation targets", perturbation_targets, None),
        (7, "Newton polytope obstruction", newton, None),
        (8, "Biermann basis", biermann, None),
        (9, "zero catalogs", zero_catalogs, None),
        (10, "multiplier feasibility", triangle, None),
        (11, "region K against audits", region, None),
        (12, "Motzkin family boundary", motzkin_boundary, None),
    ];
    let mut unexpected = 0;
    for (id, name, check, limit) in criteria {
        let t = Instant::now();
        let mut out = check();
        let dt = t.elapsed();
        if let Some(limit) = limit {
            if dt >= limit {
                out.pass = false;
                out.detail.push_str(&format!("; exceeded {limit:?}"));
            }
        }
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {id:>2}. {name} ({dt:.2?}): {}", out.detail);
        match (out.pass, known) {
            (false, Some((_, why))) => println!("        known red: {why}"),
            (false, None) => unexpected += 1,
            (true, _) => {}
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
