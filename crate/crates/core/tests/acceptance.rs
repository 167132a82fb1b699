//! Acceptance criteria 1-9. Run with `--nocapture` to see one verdict line
//! per criterion; the test fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cadprep::cad::{build_cad, project_all, CadConfig, CadTree};
use cadprep::groebner::{buchberger, s_polynomial};
use cadprep::harness::{
    corpus, correlation_analysis, run_experiment, ExperimentRecord, Status, CENSORED_CELLS, CENSORED_TIME_MS,
    CENSORING_RULES,
};
use cadprep::metrics::{best_order_exhaustive, greedy_order, pearson, sotd_set};
use cadprep::pipeline::{enumerate_variants, original, Formulation, Label};
use cadprep::poly::{ratio, Monomial, MonomialOrder, Polynomial, Rational, Variable};
use cadprep::reduction::{pprecond, sprecond};
use common::*;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { ok: false, detail: detail.into() }
}

/// Runs `f`, failing it when it panics or overruns `limit`.
fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Verdict + std::panic::UnwindSafe) -> bool {
    let start = Instant::now();
    let v = std::panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        fail(format!("panicked: {msg}"))
    });
    let took = start.elapsed();
    let ok = v.ok && took <= limit;
    let timing = if took <= limit {
        format!("{:.2}s", took.as_secs_f64())
    } else {
        format!("{:.2}s exceeds {:.1}s", took.as_secs_f64(), limit.as_secs_f64())
    };
    println!("criterion {n} [{name}]: {} ({timing}) {}", if ok { "PASS" } else { "FAIL" }, v.detail);
    ok
}

fn groebner_suite() -> Verdict {
    let mut systems = 0;
    for (id, p) in corpus::load_all().unwrap() {
        if p.equations().is_empty() {
            continue;
        }
        systems += 1;
        let ord = p.order();
        let g = buchberger(p.equations(), ord).unwrap();
        for a in g.generators() {
            for b in g.generators() {
                if a != b && !g.normal_form(&s_polynomial(a, b, ord).unwrap()).unwrap().is_zero() {
                    return fail(format!("{id}: S-polynomial does not reduce to 0"));
                }
            }
        }
        if let Some(e) = p.equations().iter().find(|e| !g.normal_form(e).unwrap().is_zero()) {
            return fail(format!("{id}: input {e} has nonzero normal form"));
        }
        let key = |gens: &[Polynomial]| gens.iter().map(|q| q.to_string()).collect::<BTreeSet<_>>();
        let want = key(g.generators());
        let mut eqs = p.equations().to_vec();
        for k in 0..eqs.len() {
            eqs.rotate_left(1);
            if k % 2 == 1 {
                eqs.reverse();
            }
            if key(buchberger(&eqs, ord).unwrap().generators()) != want {
                return fail(format!("{id}: permuted input changes the basis"));
            }
        }
    }
    pass(format!("{systems} corpus systems"))
}

fn sphere_pair() -> (std::sync::Arc<cadprep::poly::VarContext>, Vec<Polynomial>, MonomialOrder) {
    let c = ctx(&["x", "y", "z"]);
    let eqs = vec![parse(&c, "x^2-2*x+y^2+z^2-2"), parse(&c, "x^2+2*x+y^2+z^2-2")];
    let ord = MonomialOrder::from_names(&c, &["x", "y", "z"]).unwrap();
    (c, eqs, ord)
}

fn sphere_basis() -> Verdict {
    let (c, eqs, ord) = sphere_pair();
    let g = buchberger(&eqs, &ord).unwrap();
    let want = [parse(&c, "x"), parse(&c, "y^2+z^2-2")];
    let got: BTreeSet<String> = g.generators().iter().map(|p| p.to_string()).collect();
    let exp: BTreeSet<String> = want.iter().map(|p| p.to_string()).collect();
    if got == exp && g.len() == 2 {
        pass(format!("{{{}}}", g.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
    } else {
        fail(format!("got {got:?}"))
    }
}

fn variant(id: &str, label: Label) -> Formulation {
    let p = corpus::load(id).unwrap().unwrap();
    enumerate_variants(&p).into_iter().find(|v| v.label == label).unwrap().outcome.unwrap()
}

fn inequality_reduction() -> Verdict {
    let (c, eqs, ord) = sphere_pair();
    let g = buchberger(&eqs, &ord).unwrap();
    let nf = g.normal_form(&parse(&c, "x^2+y^2-1")).unwrap();
    if nf != parse(&c, "1-z^2") {
        return fail(format!("normal form {nf}"));
    }
    let all = variant("spheres-12-lt", Label::GrCAllVars).tnoi;
    let orig = variant("spheres-12-lt", Label::Original).tnoi;
    if (all, orig) != (4, 8) {
        return fail(format!("tnoi {all} vs {orig}"));
    }
    pass(format!("normal form {nf}; tnoi {all} vs {orig}"))
}

fn cad_smoke() -> Verdict {
    let c = ctx(&["x", "y"]);
    let ord = MonomialOrder::from_names(&c, &["x", "y"]).unwrap();
    let tree = build_cad(&[parse(&c, "x^2+y^2-1")], &ord).unwrap();
    if tree.cell_count() != 13 || tree.stack_sizes(2) != [1, 3, 5, 3, 1] || tree.stack_sizes(1) != [5] {
        return fail(format!("{} cells, stacks {:?}", tree.cell_count(), tree.stack_sizes(2)));
    }
    if tree.all_stacks().any(|s| s % 2 == 0) {
        return fail("even stack");
    }
    check_structure(&tree);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let checked = sampling_check(&tree, 100, &mut rng);
    pass(format!("13 cells, stacks (1,3,5,3,1), {checked} sampled points agree"))
}

fn random_poly(rng: &mut impl Rng, c: &std::sync::Arc<cadprep::poly::VarContext>, max_deg: u32, no_x: bool) -> Polynomial {
    let terms = rng.gen_range(1..=5);
    Polynomial::from_terms(
        c,
        (0..terms).map(|_| {
            let mut e = vec![0u32; 3];
            for _ in 0..rng.gen_range(0..=max_deg) {
                let v = if no_x { rng.gen_range(1..3) } else { rng.gen_range(0..3) };
                e[v] += 1;
            }
            (Monomial::from_exponents(e), ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
        }),
    )
}

fn preconditioner_signs() -> Verdict {
    let c = ctx(&["x", "y", "z"]);
    let x = Variable(0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut nonzero = 0;
    while done < 200 {
        let f = random_poly(&mut rng, &c, 4, false);
        let lc = random_poly(&mut rng, &c, 2, true);
        let tail = random_poly(&mut rng, &c, 2, true);
        if f.is_zero() || lc.is_zero() {
            continue;
        }
        let g = &(&lc * &Polynomial::var(&c, x)) + &tail;
        let (yv, zv) = (ratio(rng.gen_range(-12..=12), rng.gen_range(1..=5)), ratio(rng.gen_range(-12..=12), rng.gen_range(1..=5)));
        let at = |p: &Polynomial, xv: &Rational| p.evaluate(&[xv.clone(), yv.clone(), zv.clone()]);
        let cv = at(&lc, &Rational::zero());
        if cv.is_zero() {
            continue;
        }
        let xv = -at(&tail, &Rational::zero()) / cv;
        assert!(at(&g, &xv).is_zero());
        let want = sign(&at(&f, &xv));
        let pp = pprecond(&f, &g, x).unwrap();
        let sp = sprecond(&f, &g, x).unwrap();
        if sign(&at(&pp, &xv)) != want || sign(&at(&sp, &xv)) != want {
            return fail(format!("sign changed for f = {f}, g = {g}"));
        }
        let divides = if sp.is_zero() { pp.is_zero() } else { pp.div_exact(&sp).is_some() };
        if !divides {
            return fail(format!("sprecond does not divide pprecond for f = {f}, g = {g}"));
        }
        nonzero += usize::from(want != 0);
        done += 1;
    }
    pass(format!("{done} samples ({nonzero} with f nonzero)"))
}

fn cells_of(f: &Formulation) -> usize {
    build_cad(&f.polynomials(), &f.order).unwrap().cell_count()
}

fn directional_benefit() -> Verdict {
    let orig = variant("spheres-12-lt", Label::Original);
    let all = variant("spheres-12-lt", Label::GrCAllVars);
    let (co, ca) = (cells_of(&orig), cells_of(&all));
    let detail = format!("cells {ca} vs {co}, tnoi {} vs {}", all.tnoi, orig.tnoi);
    if ca < co && all.tnoi < orig.tnoi {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn ordering_heuristics() -> Verdict {
    let mut seen = BTreeSet::new();
    let mut problems = 0;
    for (id, p) in corpus::load_all().unwrap() {
        let polys = original(&p).polynomials();
        let key: Vec<String> = polys.iter().map(|q| q.to_string()).collect();
        if p.context().len() > 4 || !seen.insert(key) {
            continue;
        }
        problems += 1;
        let adm = p.admissible().unwrap();
        let greedy = greedy_order(&polys, &adm).unwrap();
        let gs = sotd_set(&project_all(&polys, &greedy).unwrap());
        let first = best_order_exhaustive(&polys, &adm).unwrap();
        let second = best_order_exhaustive(&polys, &adm).unwrap();
        if first != second {
            return fail(format!("{id}: exhaustive search is not deterministic"));
        }
        if gs < first.1 {
            return fail(format!("{id}: greedy sotd {gs} below exhaustive {}", first.1));
        }
    }
    pass(format!("{problems} distinct polynomial sets"))
}

fn record(problem: &str, label: Label, status: Status, total: f64, cells: Option<u64>, tnoi: usize) -> ExperimentRecord {
    ExperimentRecord {
        problem: problem.into(),
        label,
        order: "x>y".into(),
        status,
        gb_ms: 0.0,
        reduce_ms: 0.0,
        cad_ms: total,
        cells,
        tnoi: Some(tnoi),
    }
}

fn correlation_machinery() -> Verdict {
    let x: Vec<f64> = (0..50).map(|i| f64::from(i) * 0.37 - 4.0).collect();
    let up: Vec<f64> = x.iter().map(|v| 3.5 * v + 2.0).collect();
    let down: Vec<f64> = x.iter().map(|v| -0.25 * v + 9.0).collect();
    let (r1, r2) = (pearson(&x, &up).unwrap(), pearson(&x, &down).unwrap());
    if (r1 - 1.0).abs() > 1e-12 || (r2 + 1.0).abs() > 1e-12 {
        return fail(format!("r = {r1}, {r2}"));
    }
    let recs = vec![
        record("a", Label::Original, Status::Timeout, 5.0, None, 8),
        record("a", Label::GrC, Status::Ok, 10.0, Some(40), 4),
        record("b", Label::Original, Status::Ok, 2_000_000.0, Some(900), 9),
        record("b", Label::GrC, Status::Ok, 100.0, Some(30), 6),
        record("c", Label::Original, Status::Ok, 50.0, Some(70), 7),
        record("c", Label::GrC, Status::NotWellOriented, 20.0, None, 7),
    ];
    let rep = correlation_analysis(&recs, Label::GrC).unwrap();
    if rep.rules != CENSORING_RULES {
        return fail("censoring rules not reported verbatim");
    }
    let has = |p: &str, l: Label, field: &str, to: f64| {
        rep.substitutions.iter().any(|s| s.problem == p && s.label == l && s.field == field && s.replaced_by == to)
    };
    let expected = [
        has("a", Label::Original, "time", CENSORED_TIME_MS),
        has("a", Label::Original, "cells", CENSORED_CELLS),
        has("b", Label::Original, "time", CENSORED_TIME_MS),
        has("c", Label::GrC, "cells", CENSORED_CELLS),
    ];
    if expected.iter().any(|h| !h) || rep.substitutions.len() != 4 {
        return fail(format!("substitutions {:?}", rep.substitutions));
    }
    let pa = rep.points.iter().find(|p| p.problem == "a").unwrap();
    let want = CENSORED_TIME_MS.ln() - 10f64.ln();
    if (pa.y_time - want).abs() > 1e-12 {
        return fail("censored value not used in the statistic");
    }
    pass(format!("r = {r1}, {r2}; {} substitutions reported", rep.substitutions.len()))
}

fn solotareff_substitute() -> Verdict {
    let id = "solotareff-b-eqs";
    let p = corpus::load(id).unwrap().unwrap();
    if p.order().precedence() != MonomialOrder::from_names(p.context(), &["y", "x", "b", "a"]).unwrap().precedence() {
        return fail("not ordering B");
    }
    let budget = Duration::from_secs(600);
    let recs = run_experiment(id, &p, &[Label::Original, Label::GrC], budget, &CadConfig::default()).unwrap();
    let grc = recs.iter().find(|r| r.label == Label::GrC).unwrap();
    if grc.status != Status::Ok {
        return fail(format!("GrC status {}", grc.status));
    }
    let f = variant(id, Label::GrC);
    let a: CadTree = build_cad(&f.polynomials(), &f.order).unwrap();
    let b: CadTree = build_cad(&f.polynomials(), &f.order).unwrap();
    check_structure(&a);
    if a.all_stacks().any(|s| s % 2 == 0) || !same_decomposition(&a, &b) {
        return fail("structure or determinism");
    }
    if grc.cells != Some(a.cell_count() as u64) {
        return fail("harness and direct build disagree");
    }
    let orig = recs.iter().find(|r| r.label == Label::Original).unwrap();
    let orig_note = match orig.status {
        Status::Ok => format!("Original {} cells in {:.0} ms", orig.cells.unwrap(), orig.total_ms()),
        s => {
            // Censored per the report rules; the criterion still passes.
            let rep = correlation_analysis(&[orig.clone(), grc.clone(), orig.clone(), grc.clone()], Label::GrC);
            format!("Original {s}, censored: {}", rep.is_ok())
        }
    };
    pass(format!("GrC {} cells in {:.0} ms; {orig_note}", a.cell_count(), grc.total_ms()))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "groebner suite", s(5), groebner_suite),
        criterion(2, "sphere basis", Duration::from_millis(100), sphere_basis),
        criterion(3, "inequality reduction", s(5), inequality_reduction),
        criterion(4, "cad smoke", s(1), cad_smoke),
        criterion(5, "preconditioner signs", s(5), preconditioner_signs),
        criterion(6, "directional benefit", s(60), directional_benefit),
        criterion(7, "ordering heuristics", s(60), ordering_heuristics),
        criterion(8, "correlation machinery", s(5), correlation_machinery),
        criterion(9, "solotareff substitute", s(600), solotareff_substitute),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
