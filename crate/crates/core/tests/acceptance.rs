//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rangecompat::algebra::{Elem, FieldSpec, Mat};
use rangecompat::gallery::symmetric_2x2;
use rangecompat::opspace::{Direction, OperatorSpace};
use rangecompat::solver::{
    oracle_enumerate_maps, solve_compatible_maps, CompatMode, MapClass, OperatorMap,
};
use rangecompat::verify::{
    desc_f3_space, search_hom_counterexample, verify_gallery, verify_theorem, verify_theorem_up_to,
    Strategy, TheoremId, VerificationReport,
};

type Outcome = Result<String, String>;

fn field(q: u8) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

/// `[d choose k]_q` as a ratio of products of `q^d - q^i`.
fn gaussian(d: u32, k: u32, q: u128) -> u128 {
    let num: u128 = (0..k).map(|i| q.pow(d) - q.pow(i)).product();
    let den: u128 = (0..k).map(|i| q.pow(k) - q.pow(i)).product();
    num / den
}

fn passed(r: &VerificationReport) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        Err(format!(
            "{} violations in {}, first: {}",
            r.violations.len(),
            r.theorem,
            r.violations[0].detail
        ))
    }
}

fn run(
    id: TheoremId,
    n: usize,
    p: usize,
    q: u8,
    max: Option<usize>,
    s: Strategy,
) -> Result<VerificationReport, String> {
    let r = verify_theorem_up_to(id, n, p, field(q), max, s).map_err(|e| e.to_string())?;
    passed(&r)?;
    Ok(r)
}

fn expect_count(r: &VerificationReport, want: u128) -> Result<(), String> {
    if r.spaces_checked as u128 == want {
        Ok(())
    } else {
        Err(format!(
            "{} checked {} spaces, expected {want}",
            r.theorem, r.spaces_checked
        ))
    }
}

fn in_image(f: FieldSpec, s: &Mat, v: &[Elem]) -> bool {
    let mut rows = s.transpose().row_vecs();
    let before = Mat::from_rows(s.rows(), &rows).unwrap().rank(f);
    rows.push(v.to_vec());
    Mat::from_rows(s.rows(), &rows).unwrap().rank(f) == before
}

fn total() -> Outcome {
    let mut count = 0;
    for q in [2, 3, 4] {
        for n in 1..=3 {
            for p in 1..=3 {
                let r = verify_theorem(TheoremId::Total, n, p, field(q), Strategy::Exhaustive)
                    .map_err(|e| e.to_string())?;
                passed(&r)?;
                expect_count(&r, 1)?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} full spaces, every range-compatible linear map local"
    ))
}

fn linear_and_additive() -> Outcome {
    let mut details = Vec::new();
    for (q, hyperplanes) in [(2u8, 63u128), (3, 364)] {
        if gaussian(6, 5, q as u128) != hyperplanes {
            return Err(format!("hyperplane count over F{q}"));
        }
        for id in [TheoremId::Lin1, TheoremId::Hom] {
            let r = run(id, 3, 2, q, Some(1), Strategy::Exhaustive)?;
            expect_count(&r, 1 + hyperplanes)?;
        }
        details.push(format!("F{q}: 1 + {hyperplanes} spaces"));
    }
    Ok(format!("{} for Linear and Additive", details.join(", ")))
}

fn linear_twice() -> Outcome {
    let r = run(TheoremId::Lin2, 2, 2, 3, None, Strategy::Exhaustive)?;
    expect_count(&r, 1 + gaussian(4, 3, 3))?;
    let small = r.spaces_checked;
    let codim2 = gaussian(6, 4, 3);
    if codim2 != 11011 {
        return Err(format!("codim-2 count {codim2}"));
    }
    let r = run(TheoremId::Lin2, 3, 2, 3, Some(2), Strategy::Exhaustive)?;
    expect_count(&r, 1 + 364 + codim2)?;
    Ok(format!(
        "{small} spaces of Mat_2,2(F3), {} of Mat_3,2(F3)",
        r.spaces_checked
    ))
}

fn quasi_homomorphisms() -> Outcome {
    let a = run(TheoremId::QrcHom, 3, 2, 3, Some(1), Strategy::Exhaustive)?;
    expect_count(&a, 1 + 364)?;
    let b = run(TheoremId::QrcHom, 4, 2, 2, Some(1), Strategy::Exhaustive)?;
    expect_count(&b, 1 + gaussian(8, 7, 2))?;
    if Direction::all(field(3), 3).len() != 13 || Direction::all(field(2), 4).len() != 15 {
        return Err("direction counts".into());
    }
    Ok(format!(
        "{} spaces x 13 lines over F3, {} spaces x 15 lines over F2",
        a.spaces_checked, b.spaces_checked
    ))
}

fn quasi_two_rows() -> Outcome {
    let r = run(TheoremId::Qrc2a, 2, 2, 5, Some(1), Strategy::Exhaustive)?;
    expect_count(&r, 1 + 156)?;
    let special = r.side_stats.get("special_type_1").copied().unwrap_or(0);
    let local = r.side_stats.get("all_local").copied().unwrap_or(0);
    if special + local != r.spaces_checked {
        return Err(format!(
            "{special} special + {local} local != {}",
            r.spaces_checked
        ));
    }
    let f5 = field(5);
    let sym = symmetric_2x2(f5).map_err(|e| e.to_string())?;
    let sol = solve_compatible_maps(
        &sym,
        &CompatMode::QuasiRange(Direction::unit(2, 1)),
        MapClass::Linear,
    )
    .map_err(|e| e.to_string())?;
    if !sol[0].all_local() {
        return Err("non-local quasi map on symmetric 2x2 matrices over F5".into());
    }
    Ok(format!(
        "{special} special of type 1, {local} all-local; symmetric F5 case local"
    ))
}

fn affine() -> Outcome {
    let a = run(TheoremId::AffGen, 3, 2, 2, None, Strategy::Exhaustive)?;
    expect_count(&a, 1 + 63 * 2)?;
    let b = run(TheoremId::QrcAff1, 3, 2, 2, None, Strategy::Exhaustive)?;
    expect_count(&b, 1)?;
    let sample = Strategy::Sample {
        count: 2000,
        seed: 2024,
    };
    let c = run(TheoremId::AffBig, 3, 2, 3, Some(2), sample)?;
    let d = run(TheoremId::QrcAff1, 3, 2, 3, None, sample)?;
    let e = run(TheoremId::AffGen, 3, 2, 3, None, sample)?;
    Ok(format!(
        "F2: {} + {} flats; F3: {} + {} + {} sampled flats",
        a.spaces_checked, b.spaces_checked, c.spaces_checked, d.spaces_checked, e.spaces_checked
    ))
}

fn gallery() -> Outcome {
    let r = verify_gallery(&[]).map_err(|e| e.to_string())?;
    passed(&r)?;
    if r.cases.len() != 8 || r.cases.iter().any(|c| !c.nonlocal) {
        return Err("expected 8 non-local cases".into());
    }
    for c in &r.cases {
        if !c
            .checks
            .iter()
            .any(|k| k.claim.starts_with("one above") && k.passed)
        {
            return Err(format!("{} is not confirmed one above its bound", c.name));
        }
    }
    let wide = verify_gallery(&[
        ("qrc-hom-f2".to_string(), 4, 2, field(2)),
        ("alternating".to_string(), 3, 2, field(3)),
    ])
    .map_err(|e| e.to_string())?;
    passed(&wide)?;
    let codims: Vec<usize> = wide.cases.iter().map(|c| c.codim).collect();
    if codims != [2, 3] {
        return Err(format!("codimensions {codims:?}"));
    }
    Ok("8 cases at minimal parameters, plus qrc-hom-f2 (4,2) and alternating (3,2)".into())
}

fn decompositions() -> Outcome {
    let mut branches = [0u64; 3];
    let mut add = |r: &VerificationReport| {
        branches[0] += r.side_stats.get("branch_a").copied().unwrap_or(0);
        branches[1] += r.side_stats.get("branch_b").copied().unwrap_or(0);
        branches[2] += r
            .side_stats
            .get("rank_one_projection")
            .copied()
            .unwrap_or(0);
    };
    // The sweeps of the earlier criteria, where the propositions apply.
    add(&run(
        TheoremId::QrcDeg1,
        2,
        2,
        5,
        Some(1),
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg1,
        3,
        2,
        3,
        Some(1),
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg1,
        4,
        2,
        2,
        Some(1),
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg2,
        4,
        2,
        2,
        Some(1),
        Strategy::Exhaustive,
    )?);
    // Sweeps up to the propositions' own bounds, where non-local maps occur.
    add(&run(
        TheoremId::QrcDeg1,
        2,
        2,
        3,
        None,
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg1,
        3,
        2,
        3,
        None,
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg1,
        2,
        2,
        4,
        None,
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg1,
        3,
        2,
        4,
        Some(1),
        Strategy::Exhaustive,
    )?);
    add(&run(
        TheoremId::QrcDeg2,
        3,
        2,
        2,
        None,
        Strategy::Exhaustive,
    )?);
    if branches.contains(&0) {
        return Err(format!("no non-local maps were decomposed: {branches:?}"));
    }
    Ok(format!(
        "rank-one: {} non-linear endomorphism, {} D = Sx; rank-two: {} projections",
        branches[0], branches[1], branches[2]
    ))
}

fn random_space(rng: &mut ChaCha8Rng) -> (OperatorSpace, CompatMode, MapClass) {
    loop {
        let f = field([2, 3, 4, 5][rng.gen_range(0..4)]);
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(1..=3);
        let d = n * p;
        let dim = rng.gen_range(0..=d.min(3));
        let mats: Vec<Mat> = (0..dim)
            .map(|_| {
                Mat::from_vec(n, p, (0..d).map(|_| rng.gen_range(0..f.q())).collect()).unwrap()
            })
            .collect();
        let class = MapClass::ALL[rng.gen_range(0..4)];
        let space = if class.has_base() && rng.gen_bool(0.7) {
            let offset =
                Mat::from_vec(n, p, (0..d).map(|_| rng.gen_range(0..f.q())).collect()).unwrap();
            OperatorSpace::affine(f, n, p, &offset, &mats).unwrap()
        } else {
            OperatorSpace::linear_span(f, n, p, &mats).unwrap()
        };
        let len = OperatorMap::coefficient_len(&space, class) as u32;
        if (f.p() as u128).pow(len) > 1 << 16 {
            continue;
        }
        let mode = match rng.gen_range(0..3) {
            0 => CompatMode::Range,
            1 => {
                let v: Vec<Elem> = loop {
                    let v: Vec<Elem> = (0..n).map(|_| rng.gen_range(0..f.q())).collect();
                    if v.iter().any(|&x| x != 0) {
                        break v;
                    }
                };
                CompatMode::QuasiRange(Direction::new(f, &v).unwrap())
            }
            _ => CompatMode::QuasiRangeAny,
        };
        return (space, mode, class);
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut nontrivial = 0;
    for i in 0..500 {
        let (space, mode, class) = random_space(&mut rng);
        let sols = solve_compatible_maps(&space, &mode, class).map_err(|e| e.to_string())?;
        let oracle = oracle_enumerate_maps(&space, &mode, class).map_err(|e| e.to_string())?;
        for (sol, o) in sols.iter().zip(&oracle) {
            let solver: BTreeSet<Vec<u8>> = sol.coefficient_space().elements().collect();
            if solver != o.maps || sol.direction() != o.direction.as_ref() {
                return Err(format!(
                    "sample {i}: solver {} maps, oracle {}",
                    solver.len(),
                    o.maps.len()
                ));
            }
            nontrivial += usize::from(!sol.all_local());
        }
    }
    Ok(format!(
        "500 spaces agree; {nontrivial} solution spaces with non-local members"
    ))
}

fn described_family() -> Outcome {
    let mut dims = Vec::new();
    for p in [2, 3] {
        let r = run(TheoremId::DescF3, 2, p, 3, None, Strategy::Exhaustive)?;
        let (sol, loc) = (r.side_stats["solution_dim"], r.side_stats["local_dim"]);
        if sol != 2 * p as u64 || loc != p as u64 {
            return Err(format!("p = {p}: dim Sol {sol}, dim Loc {loc}"));
        }
        if desc_f3_space(p).map_err(|e| e.to_string())?.codim() != 1 {
            return Err("described space is not of codimension 1".into());
        }
        dims.push(format!("p={p}: Sol {sol} = Loc {loc} + {p}"));
    }
    Ok(dims.join(", "))
}

fn optimality_search() -> Outcome {
    let f4 = field(4);
    let found =
        search_hom_counterexample(3, 1, f4, 2, Strategy::Exhaustive).map_err(|e| e.to_string())?;
    let (space, map) = found.ok_or("no witness found")?;
    // Independent re-validation: pointwise range condition and no x with F(s) = s x.
    let elements: Vec<Mat> = space.elements().collect();
    let values: Vec<Vec<Elem>> = elements.iter().map(|s| map.evaluate(s).unwrap()).collect();
    if !elements
        .iter()
        .zip(&values)
        .all(|(s, v)| in_image(f4, s, v))
    {
        return Err("witness is not range-compatible".into());
    }
    let local = f4.elements().any(|x| {
        elements
            .iter()
            .zip(&values)
            .all(|(s, v)| s.mul_vec(f4, &[x]) == *v)
    });
    if local {
        return Err("witness is local".into());
    }
    let additive = elements.iter().all(|a| {
        elements.iter().all(|b| {
            let sum = map.evaluate(&a.add(f4, b)).unwrap();
            let parts: Vec<Elem> = map
                .evaluate(a)
                .unwrap()
                .iter()
                .zip(map.evaluate(b).unwrap())
                .map(|(&x, y)| f4.add(x, y))
                .collect();
            sum == parts
        })
    });
    if !additive {
        return Err("witness is not additive".into());
    }
    Ok(format!(
        "non-local additive map on a {}-dimensional subspace of Mat_3,1(F4)",
        space.dim()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("full spaces", total, 10),
        ("linear and additive, codim <= n-2", linear_and_additive, 60),
        ("linear, codim <= 2n-3", linear_twice, 600),
        (
            "quasi additive, codim <= n-2 / n-3",
            quasi_homomorphisms,
            600,
        ),
        ("quasi linear, n = 2 over F5", quasi_two_rows, 300),
        ("affine sweeps", affine, 600),
        ("gallery tightness", gallery, 60),
        ("decomposition of non-local quasi maps", decompositions, 0),
        ("solver agrees with the oracle", oracle_equivalence, 900),
        ("described family over F3", described_family, 60),
        ("additive optimality search over F4", optimality_search, 300),
    ];
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = f();
        let elapsed = start.elapsed();
        if *budget > 0 && elapsed > Duration::from_secs(*budget) && result.is_ok() {
            result = Err(format!("took {elapsed:.1?}, budget {budget} s"));
        }
        match result {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} ({elapsed:.1?})",
                i + 1
            ),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({elapsed:.1?})", i + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} criteria failed");
        std::process::exit(1);
    }
}
