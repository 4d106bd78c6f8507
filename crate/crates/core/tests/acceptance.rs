//! Acceptance run: one PASS/FAIL line per criterion, with wall time
//! against each limit. Criteria listed in `KNOWN_FAILURES` are reported
//! as failing but do not fail the process; anything else failing does.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use chainmdp::block;
use chainmdp::construct::{self, ToeplitzSpec};
use chainmdp::conv::{self, ConvCode, MdpMethod, PolyMatrix};
use chainmdp::gamma::{self, IndependenceMethod};
use chainmdp::{format, ChainRing, ChainRingSpec, Elem, RingMatrix, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The reverse of the 6x6 Toeplitz matrix with first row (1,2,1,1,3,4) has
/// a singular proper minor, so criterion 5 cannot hold as stated.
const KNOWN_FAILURES: &[usize] = &[5];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn c1() -> Check {
    let z8 = common::zmod(2, 3);
    ensure(z8.representatives() == [z8.zero(), z8.one()], "T != {0, 1}")?;
    let digits = z8.gamma_adic_decompose(&z8.from_int(6));
    ensure(digits == [z8.zero(), z8.one(), z8.one()], format!("digits of 6: {digits:?}"))?;
    Ok("T = {0,1}, 6 = 0 + 1*2 + 1*4".into())
}

fn c2() -> Check {
    let r = ChainRing::new(ChainRingSpec::galois(2, 3, 3, Some(vec![7, 5, 6, 1]))).map_err(|e| e.to_string())?;
    let xi = r.teichmuller_generator().ok_or("no generator")?;
    let ord = r.multiplicative_order(&xi);
    ensure(ord == Some(7), format!("order {ord:?}"))?;
    ensure(r.representatives().len() == 8, "|T| != 8")?;
    Ok(format!("{} built, ord(xi) = 7, |T| = 8", r.name()))
}

fn c3() -> Check {
    let z4 = common::zmod(2, 2);
    let g = PolyMatrix::from_int_coeffs(
        &z4,
        &[
            vec![vec![1, 1, 1], vec![2, 2, 2], vec![0, 0, 0]],
            vec![vec![1, 1, 1], vec![2, 2, 2], vec![0, 0, 0]],
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 2]],
        ],
    )
    .map_err(|e| e.to_string())?;
    let gc = g.sliding_matrix(1);
    let shown = RingMatrix::from_ints(
        &z4,
        &[
            vec![1, 1, 1, 1, 1, 1],
            vec![2, 2, 2, 2, 2, 2],
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 2, 2, 2],
            vec![0, 0, 0, 0, 0, 0],
        ],
    );
    ensure(gc == shown, "sliding matrix differs from the displayed one")?;
    ensure(gamma::is_gamma_generator_sequence(&gc), "not a generator sequence")?;
    let indep = gamma::is_gamma_linearly_independent(&gc, IndependenceMethod::Oracle, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(!indep, "Oracle reports independent")?;
    ensure(!common::brute_independent(&gc), "brute force reports independent")?;
    Ok("6 rows of G_1^c are gamma-dependent (Oracle and brute force)".into())
}

fn c4() -> Check {
    let sets: Vec<Vec<usize>> = block::nu_optimal_sets(16, 5).into_iter().map(|p| p.k_list).collect();
    for named in [vec![3, 0, 0, 0, 1], vec![0, 4, 0, 0, 0]] {
        ensure(sets.contains(&named), format!("{named:?} missing"))?;
    }
    for nu in 1..=6 {
        for k in 0..=40 {
            for p in block::nu_optimal_sets(k, nu) {
                ensure(p.k_list.iter().sum::<usize>() == k.div_ceil(nu), format!("k={k} nu={nu}: {:?}", p.k_list))?;
                ensure(
                    p.k_list.iter().enumerate().map(|(i, ki)| ki * (nu - i)).sum::<usize>() == k,
                    format!("k={k} nu={nu}: weighted sum"),
                )?;
            }
        }
    }
    Ok(format!("(16,5) gives {} sets including (3,0,0,0,1), (0,4,0,0,0); sums are ceil(k/nu) up to k=40, nu=6", sets.len()))
}

fn c5() -> Check {
    let z121 = common::zmod(11, 2);
    let t = ToeplitzSpec::from_ints(&z121, &[1, 2, 1, 1, 3, 4]);
    let f11 = common::field(11);
    let tp = ToeplitzSpec::new(&f11, t.first_row.iter().map(|x| z121.project(x)).collect());
    // both determinant paths on every proper minor of T and its reverse
    for spec in [&t, &t.reversed()] {
        let a = spec.matrix();
        for (rows, cols) in construct::proper_pairs(spec.size()) {
            let sub = a.submatrix(&rows, &cols);
            let ring_unit = z121.is_unit(&gamma::determinant(&sub).map_err(|e| e.to_string())?);
            let field_unit = !gamma::determinant(&sub.project()).map_err(|e| e.to_string())?.is_zero();
            ensure(ring_unit == field_unit, format!("paths disagree on {rows:?} x {cols:?}"))?;
        }
    }
    ensure(construct::is_gamma_superregular(&t), "T is not superregular")?;
    ensure(construct::is_gamma_superregular(&tp), "projection is not superregular")?;
    let bad = construct::superregular_certificate(&t.reversed())
        .into_iter()
        .find(|m| m.valuation > 0);
    let field_rev = construct::is_reverse_gamma_superregular(&tp);
    match bad {
        None if field_rev => Ok("reverse superregular over Z121 and F11".into()),
        None => Err("reverse superregular over Z121 but not over F11".into()),
        Some(m) => Err(format!(
            "T is superregular and determinant paths agree on all minors, but the reverse is not: \
             rows {:?} x cols {:?} (1-based) has valuation {}; over F11 reverse superregular = {}",
            m.rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
            m.cols.iter().map(|i| i + 1).collect::<Vec<_>>(),
            m.valuation,
            field_rev
        )),
    }
}

fn c6() -> Check {
    let c = format::load_code(&data("z121_322.json")).map_err(|e| e.to_string())?;
    let r = c.ring().clone();
    let err = |e: chainmdp::Error| e.to_string();
    ensure(c.is_delay_free().map_err(err)?, "not delay-free")?;
    ensure(c.encoder().is_reduced().map_err(err)?, "not reduced")?;
    ensure(c.encoder().gamma_degree().map_err(err)? == 2, "gamma-degree != 2")?;
    let d: Vec<usize> = (0..=1).map(|j| c.column_distance(j, DEFAULT_BUDGET)).collect::<Result<_, _>>().map_err(err)?;
    // independent count over all 11^4 message pairs (u_0, u_1) in T^2
    let reps = r.representatives();
    let gc = c.sliding_matrix(1);
    let mut brute = [usize::MAX; 2];
    let mut seen = 0usize;
    for digits in common::tuples(reps.len(), 4) {
        let u: Vec<Elem> = digits.iter().map(|&i| reps[i]).collect();
        let v = gc.left_mul_vec(&u);
        seen += 1;
        if v[..3].iter().all(Elem::is_zero) {
            continue;
        }
        brute[1] = brute[1].min(common::weight(&v));
        brute[0] = brute[0].min(common::weight(&v[..3]));
    }
    ensure(seen == 11usize.pow(4), "message count")?;
    ensure(d == [3, 5] && brute == [3, 5], format!("distances {d:?}, enumeration {brute:?}"))?;
    for m in [MdpMethod::Minors, MdpMethod::Distances] {
        ensure(c.is_mdp(m, DEFAULT_BUDGET).map_err(err)?, format!("not MDP under {m:?}"))?;
        ensure(c.is_reverse_mdp(m, DEFAULT_BUDGET).map_err(err)?, format!("not reverse MDP under {m:?}"))?;
    }
    Ok("delay-free, reduced, gamma-degree 2, d = [3,5] over 11^4 messages, MDP and reverse MDP under both methods".into())
}

fn c7() -> Check {
    let rings = [common::zmod(2, 2), common::zmod(3, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut total, mut mdp) = (0, 0);
    while total < 120 {
        let r = &rings[total % 2];
        let n = rng.gen_range(2..=4);
        let c = ConvCode::new(common::random_delay_free_code(r, n, 1, &mut rng)).map_err(|e| e.to_string())?;
        let (k0, _) = c.mdp_preconditions().map_err(|e| e.to_string())?;
        ensure(k0 == 1 && c.k() == 2 && c.delta() <= 2, "instance outside the family")?;
        let a = c.is_mdp(MdpMethod::Distances, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let b = c.is_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(a == b, format!("verdicts differ on {}", c.encoder().to_json()))?;
        mdp += a as usize;
        total += 1;
    }
    Ok(format!("{total} codes over Z4/Z9, {mdp} MDP, verdicts identical"))
}

fn c8() -> Check {
    let pairs = [
        (common::field(2), common::zmod(2, 2)),
        (common::field(3), common::zmod(3, 2)),
        (common::field(11), common::zmod(11, 2)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut total, mut reverse, mut mdp) = (0, 0, 0);
    let err = |e: chainmdp::Error| e.to_string();
    while total < 60 {
        let (f, r) = &pairs[total % 3];
        let (k, n) = if f.q() == 11 { (1, 2) } else { [(1, 2), (1, 3), (2, 3)][rng.gen_range(0..3)] };
        let equal = rng.gen_bool(0.5);
        let gt = common::random_field_encoder(f, k, n, 1, equal, &mut rng);
        let field = construct::field_code(&gt).map_err(err)?;
        let lifted = construct::lift_from_residue_field(&gt, r).map_err(err)?;
        let a = field.is_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?;
        let b = lifted.is_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?;
        ensure(a == b, format!("MDP differs on {}", gt.to_json()))?;
        mdp += a as usize;
        let degs = field.row_degrees();
        if field.delta() % k == 0 && degs.iter().all(|&d| d == degs[0]) {
            let a = field.is_reverse_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?;
            let b = lifted.is_reverse_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?;
            ensure(a == b, format!("reverse MDP differs on {}", gt.to_json()))?;
            reverse += 1;
        }
        total += 1;
    }
    Ok(format!("{total} field codes over F2/F3/F11, {mdp} MDP, {reverse} reverse comparisons, all agree"))
}

fn c9() -> Check {
    let err = |e: chainmdp::Error| e.to_string();
    // raw binomials with N = mn + n - k = 5
    let choose = |n: i64, k: i64| -> i64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
    let raw: Vec<Vec<i64>> = (0..2).map(|i| (0..3).map(|c| choose(5, (i + 1) * 3 - 1 - c)).collect()).collect();
    ensure(raw == [vec![10, 5, 1], vec![1, 5, 10]], format!("raw binomials {raw:?}"))?;
    let g = construct::binomial_encoder(3, 1, 1, 7).map_err(err)?;
    let f7 = g.ring().clone();
    ensure(g.coeff(0) == RingMatrix::from_ints(&f7, &[raw[0].clone()]), "G0 mod 7")?;
    ensure(g.coeff(1) == RingMatrix::from_ints(&f7, &[raw[1].clone()]), "G1 mod 7")?;
    let c = construct::field_code(&g).map_err(err)?;
    ensure(c.is_reverse_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?, "not reverse MDP over F7")?;
    ensure(c.is_reverse_mdp(MdpMethod::Distances, DEFAULT_BUDGET).map_err(err)?, "distances disagree")?;
    let bound = construct::binomial_bound(3, 1, 1).map_err(err)?;
    ensure(bound == 200u32.into(), format!("bound {bound}"))?;
    Ok("G0 = [10,5,1], G1 = [1,5,10]; reverse MDP over F7; bound 200".into())
}

fn c10() -> Check {
    let err = |e: chainmdp::Error| e.to_string();
    let c = format::load_code(&data("f161051_724.json")).map_err(err)?;
    ensure((c.n(), c.k(), c.delta()) == (7, 2, 4), "parameters")?;
    let gc = c.sliding_matrix(c.l_index().map_err(err)?);
    ensure((gc.rows(), gc.cols()) == (6, 21), format!("sliding matrix {}x{}", gc.rows(), gc.cols()))?;
    let t = Instant::now();
    ensure(c.is_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?, "field code not MDP")?;
    let field_time = t.elapsed();
    // cofactor cross-check on a spread of admissible selections
    let sets = conv::admissible_column_sets(7, 2, 2, DEFAULT_BUDGET).map_err(err)?;
    for cols in sets.iter().step_by(sets.len() / 40) {
        let sub = gc.select_cols(cols);
        let d = common::laplace_det(&sub);
        ensure(d == gamma::determinant(&sub).map_err(err)?, format!("determinants differ on {cols:?}"))?;
        ensure(!d.is_zero(), format!("zero minor on {cols:?}"))?;
    }
    let lifted = format::load_code(&data("gr121_5_742_lift.json")).map_err(err)?;
    ensure(lifted.encoder().project().coeffs()[0].select_rows(&[0, 1]) == c.encoder().coeffs()[0], "lift does not project back")?;
    let t = Instant::now();
    ensure(lifted.is_mdp(MdpMethod::Minors, DEFAULT_BUDGET).map_err(err)?, "lift not MDP")?;
    Ok(format!(
        "{} admissible 6x6 minors nonzero over F_11^5 ({:.1?}); GR(121,5) lift MDP via minors ({:.1?})",
        sets.len(),
        field_time,
        t.elapsed()
    ))
}

fn bound_check(c: &ConvCode, max_j: usize) -> std::result::Result<(), String> {
    let err = |e: chainmdp::Error| e.to_string();
    let singleton = conv::generalized_singleton_bound(c.n(), c.k(), c.delta(), c.nu()).map_err(err)?;
    let profile = c.column_distances(max_j, DEFAULT_BUDGET).map_err(err)?.values;
    let k0 = c.k() / c.nu();
    let free = c.params_g0().k_list.iter().skip(1).all(|&x| x == 0) && c.params_g0().k_list[0] == k0;
    for (j, &d) in profile.iter().enumerate() {
        let opt = conv::optimal_cd_bound(j, c.n(), c.k(), c.nu()).map_err(err)?;
        ensure(d as i64 <= opt, format!("d_{j} = {d} > {opt} on {}", c.encoder().to_json()))?;
        ensure(d <= singleton, format!("d_{j} = {d} > singleton {singleton}"))?;
        if j > 0 {
            ensure(profile[j - 1] <= d, "not monotone")?;
        }
        if free && d == (c.n() - k0) * (j + 1) + 1 {
            for (i, &e) in profile[..j].iter().enumerate() {
                ensure(e == (c.n() - k0) * (i + 1) + 1, format!("saturation at {j} but not at {i}"))?;
            }
        }
    }
    Ok(())
}

fn c11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rings = [common::zmod(2, 2), common::zmod(3, 2), ChainRing::truncated(4, 2).unwrap()];
    let mut count = 0;
    for i in 0..150 {
        let r = &rings[i % 3];
        let n = rng.gen_range(2..=4);
        let c = ConvCode::new(common::random_delay_free_code(r, n, 1, &mut rng)).map_err(|e| e.to_string())?;
        bound_check(&c, 2)?;
        count += 1;
    }
    let fields = [common::field(2), common::field(3)];
    for i in 0..100 {
        let f = &fields[i % 2];
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k + 1..=4);
        let c = ConvCode::new(common::random_field_encoder(f, k, n, 1, false, &mut rng)).map_err(|e| e.to_string())?;
        bound_check(&c, 2)?;
        count += 1;
    }
    Ok(format!("{count} codes over Z4, Z9, F4[u]/(u^2), F2, F3 within both bounds, monotone, saturation propagates downward"))
}

fn c12() -> Check {
    let rings = [common::zmod(2, 2), common::zmod(3, 2), ChainRing::truncated(4, 2).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut dependent = 0;
    for r in &rings {
        let mut done = 0;
        while done < 500 {
            let a = common::random_generator_sequence(r, rng.gen_range(1..=3), rng.gen_range(1..=4), &mut rng);
            if a.rows() == 0 {
                continue;
            }
            let fast = gamma::is_gamma_linearly_independent(&a, IndependenceMethod::ShapeFast, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let oracle = gamma::is_gamma_linearly_independent(&a, IndependenceMethod::Oracle, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(fast == oracle, format!("disagree over {} on {:?}", r.name(), a.row_vectors()))?;
            dependent += !fast as usize;
            done += 1;
        }
    }
    Ok(format!("1500 sequences over Z4, Z9, F4[u]/(u^2) agree ({dependent} dependent)"))
}

fn c13() -> Check {
    let err = |e: chainmdp::Error| e.to_string();
    let z8 = common::zmod(2, 3);
    let zz = PolyMatrix::from_int_coeffs(&z8, &[vec![vec![0, 0]], vec![vec![1, 1]]]).map_err(err)?;
    ensure(zz.is_free(), "[z z] not free")?;
    let stack = format::load_code(&data("zpr_zz_stack.json")).map_err(err)?;
    ensure(stack.encoder().coeff(0).is_zero(), "G(0) != 0")?;
    ensure(!stack.is_delay_free().map_err(err)?, "stacked encoder is delay-free")?;
    // 4 (1 + z, 1): A(0) = (1, 1) has full rank
    let a = PolyMatrix::from_int_coeffs(&z8, &[vec![vec![4, 4]], vec![vec![4, 0]]]).map_err(err)?;
    ensure(!a.is_free(), "p^(r-1) A(z) is free")?;
    let c = ConvCode::new(a).map_err(err)?;
    ensure(c.is_delay_free().map_err(err)?, "p^(r-1) A(z) not delay-free")?;
    Ok("[z z] free, its gamma-encoder has G(0) = 0; 4(1+z, 1) delay-free, not free".into())
}

fn main() {
    let criteria: Vec<(usize, u64, fn() -> Check)> = vec![
        (1, 1, c1),
        (2, 1, c2),
        (3, 1, c3),
        (4, 5, c4),
        (5, 10, c5),
        (6, 30, c6),
        (7, 300, c7),
        (8, 300, c8),
        (9, 5, c9),
        (10, 900, c10),
        (11, 300, c11),
        (12, 120, c12),
        (13, 1, c13),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    panic::set_hook(Box::new(|_| {}));
    for (id, limit, f) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(limit) => Err(format!("{d}; over the {limit} s limit")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {id:>2}: {tag} [{:.2} s / {limit} s] {detail}", elapsed.as_secs_f64());
        if outcome.is_err() && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
