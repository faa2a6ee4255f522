//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use langton::commands::{
    cmd_hn, cmd_reduce, cmd_rootdata, deformation_report, load_document, random_s, EXIT_BAD_COCYCLE,
    EXIT_HYPOTHESIS, EXIT_PRECISION,
};
use langton::instances::{double_coset_move, random_reduction_instance, random_split_cocycle};
use langton_core::bundles::{
    birkhoff_matrix, cohomology_dims, polygons_between, LoopCocycle, SplittingType,
};
use langton_core::engine::{exact_inverse, initial_state, langton_step, step_bound, EngineConfig, StepTrace};
use langton_core::rootdata::{build_root_system, maximal_parabolic};
use langton_core::{Coeff, GroundField, LMatrix, TLaurent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const Q: GroundField = GroundField::Rationals;
const T_PREC: i64 = 32;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn type_of(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

// ------------------------------------------------------------------ 1

fn characteristic_table() -> Check {
    // bound required of a simple factor of each type
    let expected = [
        ("A", 3, "none"),
        ("B", 3, "char != 2"),
        ("C", 3, "char != 2"),
        ("D", 4, "char != 2"),
        ("G", 2, "char > 7"),
        ("F", 4, "char > 19"),
        ("E", 6, "char > 19"),
        ("E", 7, "char > 31"),
        ("E", 8, "char > 53"),
    ];
    for (label, rank, want) in expected {
        let out = cmd_rootdata(label, Some(rank), None, None).map_err(|e| e.message)?;
        let got = out.json["char_bound"].as_str().unwrap_or_default().to_string();
        ensure(got == want, || format!("{}{}: got {:?}, want {:?}", label, rank, got, want))?;
    }
    Ok("9 type labels match".into())
}

// ------------------------------------------------------------------ 2

fn filtration_lengths() -> Check {
    let table = [('A', 1), ('B', 2), ('C', 2), ('D', 2), ('G', 3), ('F', 4), ('E', 3), ('E', 4), ('E', 6)];
    let ranks = [4, 4, 4, 5, 2, 4, 6, 7, 8];
    for ((label, want), rank) in table.into_iter().zip(ranks) {
        let rs = build_root_system(label, rank).map_err(|e| e.to_string())?;
        let mut max_h = 0;
        for beta in 0..rank {
            let pd = maximal_parabolic(&rs, beta).map_err(|e| e.to_string())?;
            max_h = max_h.max(pd.length());
            if label == 'A' {
                ensure(pd.level(2).is_empty(), || format!("A{} beta {}: U_2 nonempty", rank, beta + 1))?;
            }
        }
        ensure(max_h == want, || format!("{}{}: max h = {}, want {}", label, rank, max_h, want))?;
    }
    for label in ['B', 'C', 'D'] {
        for rank in 4..=8 {
            let rs = build_root_system(label, rank).map_err(|e| e.to_string())?;
            for beta in 0..rank {
                let h = maximal_parabolic(&rs, beta).map_err(|e| e.to_string())?.length();
                ensure(h <= 2, || format!("{}{} beta {}: h = {}", label, rank, beta + 1, h))?;
            }
        }
    }
    for rank in 1..=8 {
        let rs = build_root_system('A', rank).map_err(|e| e.to_string())?;
        for beta in 0..rank {
            let pd = maximal_parabolic(&rs, beta).map_err(|e| e.to_string())?;
            ensure(pd.length() == 1, || format!("A{}: U_2 nonempty", rank))?;
        }
    }
    Ok("max h table, B/C/D <= 2 and type A U_2 = (1) hold".into())
}

// ------------------------------------------------------------------ 3

fn birkhoff_certification() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let instances = 200;
    let moves = 50;
    let mut factorizations = 0;
    for k in 0..instances {
        let n = 2 + k % 2;
        let (m, ty) = random_split_cocycle(&mut rng, n);
        for mv in 0..=moves {
            let cur = if mv == 0 { m.clone() } else { double_coset_move(&mut rng, &m, 40) };
            let f = birkhoff_matrix(&cur, T_PREC).map_err(|e| format!("instance {} move {}: {}", k, mv, e))?;
            factorizations += 1;
            let residual = f.a.mul(&cur).mul(&f.b).sub(&f.d());
            ensure(residual.is_zero(), || format!("instance {} move {}: A M B != D", k, mv))?;
            let d = &f.d_exponents;
            ensure(d.windows(2).all(|w| w[0] >= w[1]), || format!("instance {}: unsorted {:?}", k, d))?;
            ensure(d.iter().sum::<i64>() == 0, || format!("instance {}: sum {:?} != 0", k, d))?;
            ensure(f.splitting_type() == ty, || {
                format!("instance {} move {}: type {} != {}", k, mv, f.splitting_type(), ty)
            })?;
        }
    }
    Ok(format!("{} instances, {} factorizations", instances, factorizations))
}

// ------------------------------------------------------------------ 4

fn rank(mut rows: Vec<Vec<Coeff>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] * &inv;
                for k in c..cols {
                    let sub = &f * &rows[r][k];
                    rows[i][k] = &rows[i][k] - &sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// `h^0` of the bundle glued by `t^{-k} g`: `f_out` over `k[t^-1]` (degree at most
/// `window`) with `t^k g^{-1} f_out` integral.
fn h0_by_rank(g_inv: &LMatrix, k: i64, window: i64) -> usize {
    let n = g_inv.rows();
    let mut images = Vec::new();
    for c in 0..n {
        for j in 0..=window {
            let col: Vec<TLaurent> = (0..n).map(|r| g_inv.get(r, c).shift_t(k - j)).collect();
            images.push(col);
        }
    }
    let mut keys = BTreeSet::new();
    for img in &images {
        for (r, x) in img.iter().enumerate() {
            for (e, _) in x.terms().filter(|(e, _)| *e < 0) {
                keys.insert((r, e));
            }
        }
    }
    let rows: Vec<Vec<Coeff>> = keys
        .iter()
        .map(|(r, e)| images.iter().map(|img| img[*r].coeff(*e).as_constant().unwrap()).collect())
        .collect();
    images.len() - if rows.is_empty() { 0 } else { rank(rows) }
}

fn cohomology() -> Check {
    for d in -6..=6i64 {
        let want = ((d + 1).max(0) as usize, (-d - 1).max(0) as usize);
        let got = cohomology_dims(d);
        ensure(got == want, || format!("O({}): got {:?}, want {:?}", d, got, want))?;
    }
    // t^c glues O(-c)
    for c in -4..=4i64 {
        let m = LMatrix::diag_t_powers(Q, 1, &[c]);
        let h0 = h0_by_rank(&exact_inverse(&m).map_err(|e| e.to_string())?, 0, 8);
        ensure(h0 == (1 - c).max(0) as usize, || format!("t^{}: h0 = {}", c, h0))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..40 {
        let n = 2 + k % 2;
        let (m, _) = random_split_cocycle(&mut rng, n);
        let ty = birkhoff_matrix(&m, T_PREC).map_err(|e| e.to_string())?.splitting_type();
        let inv = exact_inverse(&m).map_err(|e| e.to_string())?;
        for twist in -2..=3 {
            let want: usize = ty.exponents().iter().map(|a| (a + twist + 1).max(0) as usize).sum();
            let got = h0_by_rank(&inv, twist, 24);
            ensure(got == want, || format!("instance {} twist {}: h0 {} != {} for {}", k, twist, got, want, ty))?;
        }
    }
    Ok("dims for d in [-6, 6]; h0 pins exponents on 40 cocycles".into())
}

// ------------------------------------------------------------------ 5

/// Conditions of the modification step, checked from the outside.
fn step_conditions(before: &LoopCocycle, after: &LoopCocycle, step: &StepTrace) -> Result<(), String> {
    let n = before.rank();
    let cut = step.cut;
    // (1) the special fiber before the step has a block upper triangular normal form
    let sf = before.special_fiber().map_err(|e| e.to_string())?;
    let bt = birkhoff_matrix(sf.matrix(), T_PREC).map_err(|e| e.to_string())?.splitting_type();
    ensure(bt == step.before_type, || "before type mismatch".into())?;
    let blocks = step.parabolic.offsets();
    ensure(blocks.contains(&cut), || format!("cut {} is not a block boundary {:?}", cut, blocks))?;
    // (2) the conjugated cocycle is integral over R[pi^{1/N}]
    ensure(after.matrix().entries().all(|(_, _, x)| x.is_integral()), || "g' is not integral".into())?;
    ensure(after.matrix().root_denominator() == step.pi_denominator, || "root denominator".into())?;
    // (3) its reduction lies in Q^-((t))
    let red = after.special_fiber().map_err(|e| e.to_string())?;
    ensure(red == step.reduced_fiber, || "reduced fiber differs from g' mod pi^{1/N}".into())?;
    for i in 0..cut {
        for j in cut..n {
            ensure(red.matrix().get(i, j).is_exact_zero(), || format!("entry ({}, {}) of g' mod pi", i + 1, j + 1))?;
        }
    }
    // (4) the extension class is nonzero
    ensure(step.class_nonzero && step.classes.iter().any(|c| !c.is_zero()), || "zero class".into())?;
    Ok(())
}

fn run_steps(g: &LoopCocycle, config: &EngineConfig) -> Result<(Vec<LoopCocycle>, Vec<StepTrace>, SplittingType), String> {
    let mut state = initial_state(g, config).map_err(|e| e.to_string())?;
    let mut cocycles = vec![state.cocycle.clone()];
    let mut steps = Vec::new();
    while !state.special_type.is_semistable() {
        if steps.len() >= config.max_steps {
            return Err(format!("no semistable fiber after {} steps", steps.len()));
        }
        let (next, step) = langton_step(&state, config).map_err(|e| e.to_string())?;
        cocycles.push(next.cocycle.clone());
        steps.push(step);
        state = next;
    }
    Ok((cocycles, steps, state.generic_type))
}

fn worked_example() -> Check {
    let doc = load_document(&data("worked_sl2.json"), None).map_err(|e| e.message)?;
    let hn = cmd_hn(&doc).map_err(|e| e.message)?.json;
    ensure(type_of(&hn["generic"]) == [0, 0], || format!("generic {}", hn["generic"]))?;
    ensure(type_of(&hn["special"]) == [1, -1], || format!("special {}", hn["special"]))?;
    let out = cmd_reduce(&doc, 64).map_err(|e| e.message)?;
    ensure(out.code == 0, || format!("reduce exit {}", out.code))?;
    let r = out.json;
    ensure(type_of(&r["final"]) == [0, 0], || format!("final {}", r["final"]))?;
    let steps = r["steps"].as_array().unwrap();
    ensure(!steps.is_empty(), || "no steps".into())?;
    for s in steps {
        let before = SplittingType::new(type_of(&s["before"]));
        let after = SplittingType::new(type_of(&s["after"]));
        ensure(before.strictly_dominates(&after), || format!("{} -> {} not strict", before, after))?;
        ensure(s["class_nonzero"] == json!(true), || "class_nonzero false".into())?;
    }
    let g = doc.cocycle(T_PREC).map_err(|e| e.to_string())?;
    let (cocycles, trace, _) = run_steps(&g, &EngineConfig::default())?;
    for (k, step) in trace.iter().enumerate() {
        step_conditions(&cocycles[k], &cocycles[k + 1], step).map_err(|e| format!("step {}: {}", k + 1, e))?;
    }
    Ok(format!(
        "{} step(s), e* = {}, N = {}",
        steps.len(),
        steps[0]["e_star"],
        r["N"]
    ))
}

// ------------------------------------------------------------------ 6, 7

struct Run {
    steps: Vec<StepTrace>,
}

fn end_to_end(runs: &mut Vec<Run>) -> Check {
    let config = EngineConfig {
        verify_generic: false,
        ..EngineConfig::default()
    };
    let count = 50;
    let mut total_steps = 0;
    let mut adjustments = 0;
    for seed in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let n = 2 + (seed as usize) % 2;
        let g = random_reduction_instance(&mut rng, n);
        let generic = birkhoff_matrix(g.generic_fiber().matrix(), T_PREC)
            .map_err(|e| format!("seed {}: {}", seed, e))?
            .splitting_type();
        ensure(generic.is_semistable(), || format!("seed {}: generic {}", seed, generic))?;
        let (cocycles, steps, _) = run_steps(&g, &config).map_err(|e| format!("seed {}: {}", seed, e))?;
        let initial = steps[0].before_type.clone();
        ensure(!initial.is_semistable(), || format!("seed {}: special fiber semistable", seed))?;
        let bound = step_bound(&initial, &generic);
        ensure(bound + 1 == polygons_between(&generic, &initial).len(), || "bound".into())?;
        ensure(steps.len() <= bound, || format!("seed {}: {} steps > bound {}", seed, steps.len(), bound))?;
        for (k, s) in steps.iter().enumerate() {
            ensure(s.before_type.strictly_dominates(&s.after_type), || {
                format!("seed {} step {}: {} -> {}", seed, k + 1, s.before_type, s.after_type)
            })?;
            let gen = birkhoff_matrix(cocycles[k + 1].generic_fiber().matrix(), T_PREC)
                .map_err(|e| format!("seed {}: {}", seed, e))?
                .splitting_type();
            ensure(gen == generic, || format!("seed {} step {}: generic became {}", seed, k + 1, gen))?;
            adjustments += s.inner_adjustments;
        }
        let last = steps.last().unwrap().after_type.clone();
        ensure(last == generic, || format!("seed {}: final {} != generic {}", seed, last, generic))?;
        total_steps += steps.len();
        runs.push(Run { steps });
    }
    Ok(format!(
        "{} instances, {} steps, {} coboundary adjustments",
        count, total_steps, adjustments
    ))
}

fn deformation(runs: &[Run]) -> Check {
    ensure(!runs.is_empty(), || "criterion 6 produced no runs".into())?;
    let mut checked = 0;
    for (r, run) in runs.iter().enumerate() {
        for (k, step) in run.steps.iter().enumerate() {
            let s = random_s(step.reduced_fiber.field(), (r * 100 + k) as u64);
            let (v, ok) =
                deformation_report(step, s, T_PREC).map_err(|e| format!("run {} step {}: {}", r, k + 1, e))?;
            ensure(ok, || format!("run {} step {}: {}", r, k + 1, v))?;
            checked += 1;
        }
    }
    Ok(format!("{} reduced fibers checked at s in {{0,1,2,3,random}}", checked))
}

// ------------------------------------------------------------------ 8

fn negative_controls() -> Check {
    let mut failures = Vec::new();
    let code = |name: &str, t: Option<i64>| -> Result<i32, String> {
        let doc = match load_document(&data(name), t) {
            Ok(d) => d,
            Err(e) => return Ok(e.code),
        };
        Ok(match cmd_reduce(&doc, 64) {
            Ok(o) => o.code,
            Err(e) => e.code,
        })
    };
    let c = code("generic_unstable.json", None)?;
    if c != EXIT_HYPOTHESIS {
        failures.push(format!("unstable generic: exit {}", c));
    }
    let c = code("non_integral.json", None)?;
    if c != EXIT_BAD_COCYCLE {
        failures.push(format!("non-integral: exit {}", c));
    }
    let doc = load_document(&data("identity.json"), None).map_err(|e| e.message)?;
    let out = cmd_reduce(&doc, 64).map_err(|e| e.message)?;
    if out.code != 0 || out.json["steps"] != json!([]) {
        failures.push(format!("semistable input: exit {}, steps {}", out.code, out.json["steps"]));
    }
    let doc = load_document(&data("worked_sl2.json"), Some(4)).map_err(|e| e.message)?;
    match cmd_reduce(&doc, 64) {
        Err(e) if e.code == EXIT_PRECISION => {}
        Ok(o) => {
            let answer = o.json["final"].clone();
            if type_of(&answer) != [0, 0] {
                failures.push(format!("T = 4: wrong answer {}", answer));
            } else {
                failures.push(format!(
                    "T = 4: exit {} with the certified answer {} instead of exit {}",
                    o.code, answer, EXIT_PRECISION
                ));
            }
        }
        Err(e) => failures.push(format!("T = 4: exit {} ({})", e.code, e.message)),
    }
    if failures.is_empty() {
        Ok("exits 4, 3, zero steps, 5".into())
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let mut runs = Vec::new();
    let mut results: Vec<(usize, &str, Check, f64)> = Vec::new();
    let mut record = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Check| {
        let t0 = Instant::now();
        let r = f();
        let secs = t0.elapsed().as_secs_f64();
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {} [{}] {}: {} ({:.1} s)", id, tag, name, detail, secs);
        results.push((id, name, r, secs));
    };
    record(1, "characteristic bounds", &mut characteristic_table);
    record(2, "filtration lengths", &mut filtration_lengths);
    record(3, "Birkhoff certification", &mut birkhoff_certification);
    record(4, "cohomology and sign convention", &mut cohomology);
    record(5, "worked SL2 example", &mut worked_example);
    record(6, "randomized end-to-end", &mut || end_to_end(&mut runs));
    record(7, "Levi degeneration", &mut || deformation(&runs));
    record(8, "negative controls", &mut negative_controls);
    let failed: Vec<usize> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
