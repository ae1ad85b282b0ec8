//! Acceptance suite. Each criterion runs on its own, is timed against its
//! budget and prints one PASS/FAIL line; the process fails if any does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moduli::boundary_map::SampledCircleMap;
use moduli::douady_earle::{extend, DiskPoint};
use moduli::fuchsian::{max_gap, sink_sample_with, BallLimits, GroupRepresentation, Word, SAMPLE_CLASSIFY_TOL};
use moduli::marked_moduli::{char_distance, converge_report, MarkedStructure};
use moduli::mcg_action::{verify_action_formula, MappingClass};
use moduli::moebius::{commutator_trace, hyperbolic_distance, visual_distance, BoundaryPoint, ElementClass, MoebiusTransform};
use moduli::pants_builder::PantsDecomposition;
use moduli::Error;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lib<T>(r: moduli::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn genus_two_limits() -> BallLimits {
    BallLimits::with_budget(20_000_000)
}

fn torus(length: f64, twist: f64) -> GroupRepresentation {
    PantsDecomposition::punctured_torus(length, twist).build_representation().unwrap()
}

fn genus_two(twist: f64) -> GroupRepresentation {
    PantsDecomposition::genus_two([1.0, 1.2, 1.5], [0.0, twist, 0.0]).build_representation().unwrap()
}

fn suite() -> Vec<(&'static str, GroupRepresentation)> {
    vec![
        ("three-cusp sphere", PantsDecomposition::three_cusp_sphere().build_representation().unwrap()),
        ("torus(1, 0)", torus(1.0, 0.0)),
        ("torus(0.5, 0.3)", torus(0.5, 0.3)),
        ("torus(2, 0.7)", torus(2.0, 0.7)),
        ("four-cusp sphere", PantsDecomposition::four_cusp_sphere(1.0, 0.2).build_representation().unwrap()),
        ("genus two", genus_two(0.0)),
    ]
}

fn limits_for(rep: &GroupRepresentation) -> BallLimits {
    if rep.rank() > 3 {
        genus_two_limits()
    } else {
        BallLimits::default()
    }
}

fn random_sigma(rng: &mut ChaCha8Rng) -> MoebiusTransform {
    let (a, b, c) = (rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    MoebiusTransform::new(a, b, c, (1.0 + b * c) / a).unwrap()
}

fn generators(rep: &GroupRepresentation) -> Vec<Word> {
    (0..rep.rank()).map(Word::generator).collect()
}

fn torus_anchors(rep: &GroupRepresentation) -> [Word; 3] {
    let w = |s: &str| rep.parse_word(s).unwrap();
    [w("A"), w("A B"), w("B")]
}

fn pants_traces() -> Outcome {
    let mut worst_cuff: f64 = 0.0;
    let mut cusps = 0;
    for (name, rep) in suite() {
        for cuff in rep.cuffs() {
            let tr = lib(rep.evaluate(&cuff.word))?.trace().abs();
            worst_cuff = worst_cuff.max((tr - 2.0 * (cuff.length / 2.0).cosh()).abs());
        }
        for p in rep.peripheral_words() {
            let class = lib(rep.evaluate(p))?.classify(1e-6);
            if class != ElementClass::Parabolic {
                return Err(format!("{name}: cusp word {} is {class}", rep.show(p)));
            }
            cusps += 1;
        }
    }
    check(worst_cuff < 1e-6, format!("max cuff trace error {worst_cuff:.2e}, {cusps} cusp words parabolic"))
}

fn fricke() -> Outcome {
    let mut worst: f64 = 0.0;
    for length in [0.5, 1.0, 2.0] {
        for twist in [0.0, 0.3, 0.7] {
            let rep = torus(length, twist);
            worst = worst.max((commutator_trace(&rep.images()[0], &rep.images()[1]) + 2.0).abs());
        }
    }
    check(worst < 1e-6, format!("max |tr[A,B] + 2| = {worst:.2e}"))
}

fn suite_pairs() -> Vec<(&'static str, GroupRepresentation, GroupRepresentation)> {
    let three = PantsDecomposition::three_cusp_sphere().build_representation().unwrap();
    let four = |l, t| PantsDecomposition::four_cusp_sphere(l, t).build_representation().unwrap();
    vec![
        ("three-cusp sphere", three.clone(), three),
        ("torus twist", torus(1.0, 0.0), torus(1.0, 0.5)),
        ("torus length", torus(0.5, 0.3), torus(2.0, 0.7)),
        ("torus both", torus(1.0, 0.0), torus(2.0, 0.7)),
        ("four-cusp sphere", four(1.0, 0.2), four(1.5, 0.6)),
        ("genus two", genus_two(0.0), genus_two(0.4)),
    ]
}

fn twist_pairs() -> Vec<(&'static str, GroupRepresentation, GroupRepresentation)> {
    let four = |t| PantsDecomposition::four_cusp_sphere(1.0, t).build_representation().unwrap();
    vec![
        ("torus", torus(1.0, 0.0), torus(1.0, 0.5)),
        ("four-cusp sphere", four(0.2), four(0.6)),
        ("genus two", genus_two(0.0), genus_two(0.4)),
    ]
}

fn monotonicity() -> Outcome {
    let mut total = 0;
    for (name, base, target) in suite_pairs() {
        match SampledCircleMap::from_ball(&base, &target, 8, &limits_for(&base)) {
            Ok(f) => total += f.len(),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    let base = torus(1.0, 0.0);
    let f = lib(SampledCircleMap::from_ball(&base, &torus(1.0, 0.5), 4, &BallLimits::default()))?;
    let mut items: Vec<_> = f.pairs().zip(f.labels()).map(|((x, y), l)| (x, y, l.clone())).collect();
    let (i, j) = (items.len() / 5, 3 * items.len() / 5);
    let (yi, yj) = (items[i].1, items[j].1);
    items[i].1 = yj;
    items[j].1 = yi;
    let detected = matches!(SampledCircleMap::from_labeled(items, f.tolerance()), Err(Error::MonotonicityViolation(_)));
    check(detected, format!("{total} samples over 6 pairs at L=8, swapped fixture detected: {detected}"))
}

fn equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut conj_worst: f64 = 0.0;
    for (_, rep) in suite() {
        let target = rep.conjugate(&random_sigma(&mut rng));
        let depth = if rep.rank() > 3 { 5 } else { 6 };
        let f = lib(SampledCircleMap::from_ball(&rep, &target, depth, &limits_for(&rep)))?;
        conj_worst = conj_worst.max(lib(f.check_equivariance(&rep, &target, &generators(&rep)))?);
    }
    let mut detail = format!("conjugate pairs {conj_worst:.2e};");
    let mut monotone = true;
    for (name, base, target) in twist_pairs() {
        let defects = [4, 6, 8]
            .iter()
            .map(|&l| {
                let f = SampledCircleMap::from_ball(&base, &target, l, &limits_for(&base))?;
                f.check_equivariance(&base, &target, &generators(&base))
            })
            .collect::<moduli::Result<Vec<_>>>();
        let defects = lib(defects)?;
        monotone &= defects.windows(2).all(|w| w[1] <= w[0]);
        detail += &format!(" {name} {:.3e} {:.3e} {:.3e};", defects[0], defects[1], defects[2]);
    }
    check(conj_worst < 1e-6 && monotone, detail)
}

fn well_definedness() -> Outcome {
    let base = torus(1.0, 0.0);
    let ms = lib(MarkedStructure::new(base.clone(), torus(1.3, 0.4)))?;
    let anchors = torus_anchors(&base);
    let phi = lib(ms.phi_p(6))?;
    let chi = lib(ms.phi_at(&anchors))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut map_worst, mut char_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let moved = lib(ms.retarget(ms.target().conjugate(&random_sigma(&mut rng))))?;
        map_worst = map_worst.max(lib(moved.phi_p(6))?.sup_distance(&phi));
        char_worst = char_worst.max(lib(char_distance(&lib(moved.phi_at(&anchors))?, &chi))?);
    }
    check(
        map_worst < 1e-7 && char_worst < 1e-7,
        format!("phi_p {map_worst:.2e}, phi_at {char_worst:.2e}"),
    )
}

fn action_formula() -> Outcome {
    let ms = MarkedStructure::basepoint(torus(1.0, 0.0));
    let classes = [
        ("T_A", MappingClass::torus_twist_a()),
        ("T_B", MappingClass::torus_twist_b()),
        ("T_A^-1", MappingClass::torus_twist_a().inverse()),
        ("T_B^-1", MappingClass::torus_twist_b().inverse()),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, mc) in classes {
        let coarse = lib(verify_action_formula(&ms, &mc, 6))?;
        let fine = lib(verify_action_formula(&ms, &mc, 8))?;
        ok &= coarse < 1e-3 && fine < coarse;
        detail += &format!(" {name} L6 {coarse:.2e} L8 {fine:.2e};");
    }
    check(ok, detail.trim().to_string())
}

fn co_convergence() -> Outcome {
    let base = torus(1.0, 0.0);
    let anchors = torus_anchors(&base);
    let limit = MarkedStructure::basepoint(base.clone());
    let sequence = (0..=12)
        .map(|i| MarkedStructure::new(base.clone(), torus(1.0, 0.5f64.powi(i))))
        .collect::<moduli::Result<Vec<_>>>();
    let rows = lib(converge_report(&lib(sequence)?, &limit, 8, &anchors))?;
    let decreasing = |f: fn(&moduli::marked_moduli::ConvergeRow) -> f64| rows.windows(2).all(|w| f(&w[1]) < f(&w[0]));
    let (char_dec, map_dec) = (decreasing(|r| r.char_distance), decreasing(|r| r.bmap_distance));
    let last = rows.last().unwrap();
    let divergent = (1..=6)
        .map(|i| MarkedStructure::new(base.clone(), torus(i as f64, 0.0)))
        .collect::<moduli::Result<Vec<_>>>();
    let far = lib(converge_report(&lib(divergent)?, &limit, 6, &anchors))?;
    // The i = 1 structure is the limit itself, so the floor is taken over the others.
    let floor = far.iter().skip(1).map(|r| r.char_distance).fold(f64::INFINITY, f64::min);
    check(
        char_dec && map_dec && last.char_distance < 1e-3 && last.bmap_distance < 1e-3 && floor > 0.1,
        format!(
            "decreasing char {char_dec} bmap {map_dec}, final {:.2e} {:.2e}; divergent floor {floor:.3}",
            last.char_distance, last.bmap_distance
        ),
    )
}

fn douady_earle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let disk = |rng: &mut ChaCha8Rng, r: f64| {
        DiskPoint::new(Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .unwrap()
    };
    let id = lib(SampledCircleMap::identity(256))?;
    let mut id_worst: f64 = 0.0;
    for _ in 0..20 {
        let z = disk(&mut rng, 0.9);
        id_worst = id_worst.max((lib(extend(&id, z, 64))?.z() - z.z()).norm());
    }
    let grid: Vec<_> = (0..200).map(|k| BoundaryPoint::from_angle(0.05 + 0.0314159 * k as f64)).collect();
    let mut mob_worst: f64 = 0.0;
    for _ in 0..10 {
        let sigma = random_sigma(&mut rng);
        let f = lib(SampledCircleMap::mobius_graph(&sigma, &grid))?;
        let z = disk(&mut rng, 0.8);
        mob_worst = mob_worst.max((lib(extend(&f, z, 64))?.z() - lib(z.moved_by(&sigma))?.z()).norm());
    }
    let mut nat_worst: f64 = 0.0;
    for (_, base, target) in twist_pairs().into_iter().take(2) {
        let f = lib(SampledCircleMap::from_ball(&base, &target, 7, &BallLimits::default()))?;
        for _ in 0..4 {
            let (s1, s2) = (random_sigma(&mut rng), random_sigma(&mut rng));
            let g = lib(lib(f.pre_compose(&s2))?.post_compose(&s1))?;
            let z = disk(&mut rng, 0.7);
            let lhs = lib(extend(&g, z, 128))?;
            let rhs = lib(lib(extend(&f, lib(z.moved_by(&s2))?, 128))?.moved_by(&s1))?;
            nat_worst = nat_worst.max(lhs.distance(&rhs));
        }
    }
    check(
        id_worst < 1e-6 && mob_worst < 1e-5 && nat_worst < 1e-4,
        format!("identity {id_worst:.2e}, Möbius {mob_worst:.2e}, naturality at N=128 {nat_worst:.2e}"),
    )
}

fn density() -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for (name, rep) in [("torus", torus(1.0, 0.0)), ("genus two", genus_two(0.0))] {
        let gaps = [4, 6, 8]
            .iter()
            .map(|&l| max_gap(&sink_sample_with(&rep, l, &limits_for(&rep), SAMPLE_CLASSIFY_TOL)?))
            .collect::<moduli::Result<Vec<_>>>();
        let gaps = lib(gaps)?;
        ok &= gaps.windows(2).all(|w| w[1] < w[0]);
        detail += &format!(" {name} {:.4} {:.4} {:.4};", gaps[0], gaps[1], gaps[2]);
    }
    check(ok, format!("max_gap at L=4,6,8:{}", detail.trim_end_matches(';')))
}

fn oracles() -> Outcome {
    let m = lib(MoebiusTransform::new(5.0, 2.0, 2.0, 1.0))?;
    let mut x = Complex64::new(0.0, 1.0);
    for _ in 0..40 {
        x = m.apply(x);
    }
    let sink = lib(m.sink())?;
    let sink_err = visual_distance(sink, BoundaryPoint::from_real(x.re));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut length_worst: f64 = 0.0;
    let mut tested = 0;
    while tested < 100 {
        let sigma = random_sigma(&mut rng);
        if sigma.classify(1e-6) != ElementClass::Hyperbolic {
            continue;
        }
        let (p, q) = (lib(sigma.sink())?, lib(sigma.source())?);
        let on_axis = match (p.to_real(), q.to_real()) {
            (Some(p), Some(q)) => Complex64::new((p + q) / 2.0, (p - q).abs() / 2.0),
            (Some(p), None) | (None, Some(p)) => Complex64::new(p, 1.0),
            (None, None) => unreachable!("distinct fixed points"),
        };
        let measured = hyperbolic_distance(on_axis, sigma.apply(on_axis));
        length_worst = length_worst.max((lib(sigma.translation_length())? - measured).abs());
        tested += 1;
    }
    check(
        sink_err < 1e-6 && length_worst < 1e-9,
        format!("sink vs orbit {sink_err:.2e}, translation length vs displacement {length_worst:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("pants trace identities", 1, pants_traces),
        ("Fricke cusp check", 1, fricke),
        ("monotonicity", 30, monotonicity),
        ("equivariance", 60, equivariance),
        ("well-definedness under conjugation", 30, well_definedness),
        ("action formula", 60, action_formula),
        ("embedding co-convergence", 120, co_convergence),
        ("Douady-Earle extension", 60, douady_earle),
        ("density diagnostic", 60, density),
        ("oracle equivalence", 1, oracles),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (verdict, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {verdict} {name} [{:.2} s / {budget} s]: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
