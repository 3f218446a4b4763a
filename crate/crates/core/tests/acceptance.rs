//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`). A criterion listed in
//! `KNOWN_FAILURES` still prints FAIL but does not fail the run; anything
//! else failing makes the process exit nonzero.

use std::time::{Duration, Instant};

use cosetperm::arith::{divisors, gcd};
use cosetperm::census::{exhaustive_inputs, l_brute, l_closed, lambda_brute, lambda_count, set_a, total_count};
use cosetperm::classes::{
    binomial_check, class4_admissible, class4_generate, class4_normal_form, class_n_check, split_quadrinomial,
};
use cosetperm::construction::{assemble, monomial_profile, pp_from_h, sample_input, LFamily};
use cosetperm::format::{CertificateDoc, InputDoc};
use cosetperm::oracle::{coset_map_value, is_permutation};
use cosetperm::{coset_system, FieldCtx, Gf, Poly, SparseSpec};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose expected value disagrees with exhaustive computation.
/// The set in criterion 5 has (q^2-9)/4 elements when q = 1 mod 4.
const KNOWN_FAILURES: &[u32] = &[5];

type Outcome = Result<String, String>;

fn field_for(q: u64) -> FieldCtx {
    let (p, m) = match q {
        4 => (2, 2),
        8 => (2, 3),
        9 => (3, 2),
        _ => (q, 1),
    };
    FieldCtx::new(p, m).unwrap()
}

fn pp(ctx: &FieldCtx, f: &Poly) -> bool {
    is_permutation(ctx, f).is_permutation
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn example_54() -> Outcome {
    let start = Instant::now();
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../..");
    let doc: InputDoc =
        serde_json::from_str(&std::fs::read_to_string(format!("{root}/data/example54.json")).unwrap()).unwrap();
    let ctx = doc.field.as_ref().unwrap().build().map_err(|e| e.to_string())?;
    ensure(ctx.modulus2() == [13, 1], || format!("modulus {:?}", ctx.modulus2()))?;
    let sys = coset_system(&ctx, doc.d).unwrap();
    let input = doc.to_input(&ctx).map_err(|e| e.to_string())?;
    let cert = assemble(&ctx, &sys, &input).map_err(|e| e.to_string())?;
    let got = CertificateDoc::of(&ctx, &cert).matrix;
    let want: Vec<Vec<String>> = std::fs::read_to_string(format!("{root}/crates/cli/golden/example54.matrix.txt"))
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    let equal = got.iter().flatten().zip(want.iter().flatten()).filter(|(a, b)| a == b).count();
    ensure(got == want && equal == 48, || format!("{equal}/48 matrix entries equal"))?;
    let rep = is_permutation(&ctx, &cert.f);
    ensure(rep.is_permutation && rep.evaluations == 2209, || format!("{rep:?}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("48/48 entries, PP over 2209 elements, {:.2?}", start.elapsed()))
}

const FUZZ_QS: [u64; 8] = [3, 4, 5, 7, 8, 9, 11, 13];
const FUZZ_PER_CASE: u64 = 200;

/// Runs `check` on every seeded input of the fuzz corpus.
fn fuzz_corpus<F>(mut check: F) -> Result<u64, String>
where
    F: FnMut(&FieldCtx, &cosetperm::CosetSystem, &cosetperm::AlgoInput, &cosetperm::PPCertificate) -> Result<(), String>,
{
    let mut n = 0;
    for q in FUZZ_QS {
        let ctx = field_for(q);
        for d in divisors(q + 1) {
            let sys = coset_system(&ctx, d).unwrap();
            for r in (1..=q).filter(|&r| gcd(r as i64, q as i64 - 1) == 1) {
                for seed in 0..FUZZ_PER_CASE {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32) ^ (d << 16) ^ (r << 8));
                    let input = sample_input(&ctx, &sys, r, &mut rng).map_err(|e| format!("q={q} d={d} r={r}: {e}"))?;
                    let cert = assemble(&ctx, &sys, &input).map_err(|e| format!("q={q} d={d} r={r}: {e}"))?;
                    check(&ctx, &sys, &input, &cert).map_err(|e| format!("q={q} d={d} r={r} seed={seed}: {e}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn forward_fuzz() -> Outcome {
    let start = Instant::now();
    let n = fuzz_corpus(|ctx, sys, input, cert| {
        ensure(pp(ctx, &cert.f), || "output is not a PP".into())?;
        for (k, row) in input.rows.iter().enumerate() {
            let e = row.exponent(input.r);
            for &x in &sys.cosets[k] {
                let y = coset_map_value(ctx, &cert.h, input.r, x).map_err(|e| e.to_string())?;
                ensure(y == ctx.mul(row.lambda, ctx.pow(x, e)), || format!("not lambda x^e at {x} on A_{k}"))?;
            }
        }
        Ok(())
    })?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{n} inputs, all PPs and monomial on every coset, {:.2?}", start.elapsed()))
}

fn round_trip() -> Outcome {
    let n = fuzz_corpus(|ctx, sys, input, cert| {
        let prof = monomial_profile(ctx, sys, &cert.h, input.r).ok_or("no profile")?;
        for (p, row) in prof.iter().zip(&input.rows) {
            ensure((p.s, p.t, p.tau, p.lambda) == (row.s, row.t, row.tau, row.lambda), || {
                format!("row {}: got {:?}, want {:?}", p.k, (p.s, p.t, p.tau, p.lambda), (row.s, row.t, row.tau, row.lambda))
            })?;
        }
        Ok(())
    })?;
    Ok(format!("{n} profiles recovered exactly"))
}

fn counting() -> Outcome {
    let mut checks = 0;
    for q in [2u64, 3, 4, 5, 7] {
        let ctx = field_for(q);
        for d in divisors(q + 1) {
            let sys = coset_system(&ctx, d).unwrap();
            for t in 0..sys.block {
                let brute = l_brute(&ctx, &sys, t as usize, 0).map_err(|e| e.to_string())?;
                let closed = l_closed(q, d, t).map_err(|e| e.to_string())?;
                ensure(BigInt::from(brute) == closed, || format!("l(t,0): q={q} d={d} t={t} brute {brute} closed {closed}"))?;
                checks += 1;
            }
        }
    }
    for q in [3u64, 4, 5] {
        let ctx = field_for(q);
        for t in 0..=3usize {
            let brute = lambda_brute(&ctx, t);
            let closed = lambda_count(q, t as u32);
            ensure(BigUint::from(brute) == closed, || format!("Lambda_t: q={q} t={t} brute {brute} closed {closed}"))?;
            checks += 1;
        }
    }
    let ctx = field_for(3);
    let sys = coset_system(&ctx, 2).unwrap();
    let mut totals = Vec::new();
    for r in [1u64, 3, 5, 7] {
        let closed = total_count(&ctx, &sys, r).map_err(|e| e.to_string())?;
        let brute = exhaustive_inputs(&ctx, &sys, r).map_err(|e| e.to_string())?.tuples;
        ensure(closed == BigUint::from(brute), || format!("total: q=3 d=2 r={r} closed {closed} exhaustive {brute}"))?;
        totals.push(brute);
        checks += 1;
    }
    Ok(format!("{checks} equalities; q=3, d=2 totals {totals:?}"))
}

fn set_a_size() -> Outcome {
    let mut got = Vec::new();
    let mut bad = Vec::new();
    for q in [5u64, 7, 9, 11, 13] {
        let n = set_a(&field_for(q)).unwrap().len() as u64;
        got.push(format!("q={q}: {n}"));
        if n != (q * q - 1) / 4 {
            bad.push(format!("q={q}: brute {n} vs (q^2-1)/4 = {}", (q * q - 1) / 4));
        }
    }
    if bad.is_empty() {
        Ok(got.join(", "))
    } else {
        Err(bad.join("; "))
    }
}

fn all_green(v: &cosetperm::ClassVerdict) -> bool {
    v.conditions.iter().all(|c| c.passed) && v.pp == Some(true)
}

fn worked_classes() -> Outcome {
    // Class 1: q = 5, d = 2, (i1, j1) = (0, 1), (i2, j2) = (1, 0), b = a - 1
    let f = field_for(5);
    let sys = coset_system(&f, 2).unwrap();
    let minus_one = f.neg(Gf::ONE);
    let mut c1 = 0;
    for a in f.elements().skip(1) {
        if a == Gf::ONE || f.pow(a, 4) != minus_one {
            continue;
        }
        if f.pow(f.div(f.add(Gf::ONE, a), f.sub(Gf::ONE, a)), 3) != minus_one {
            continue;
        }
        let spec = SparseSpec::trinomial(3, 2, (0, 1), (1, 0), a, f.sub(a, Gf::ONE));
        let v = class_n_check(&f, &sys, &spec, 1).map_err(|e| e.to_string())?;
        ensure(all_green(&v), || format!("class 1, a={a}: {v:?}"))?;
        ensure(pp(&f, &spec.pp(&f)), || format!("class 1, a={a}: oracle says not a PP"))?;
        c1 += 1;
    }
    // Class 2: a = -1, i2 = 2, (2/b)^3 = 1
    let two = f.from_int(2);
    let mut c2 = 0;
    for b in f.elements().skip(1) {
        if f.pow(f.div(two, b), 3) != Gf::ONE {
            continue;
        }
        let spec = SparseSpec::trinomial(3, 2, (0, 1), (2, 0), minus_one, b);
        let v = class_n_check(&f, &sys, &spec, 2).map_err(|e| e.to_string())?;
        ensure(all_green(&v), || format!("class 2, b={b}: {v:?}"))?;
        ensure(pp(&f, &spec.pp(&f)), || format!("class 2, b={b}: oracle says not a PP"))?;
        c2 += 1;
    }
    // any (a, b) the class 1 check accepts is a PP
    let mut accepted = 0;
    for a in f.elements().skip(1) {
        for b in f.elements().skip(1) {
            let spec = SparseSpec::trinomial(3, 2, (0, 1), (1, 0), a, b);
            if class_n_check(&f, &sys, &spec, 1).map(|v| all_green(&v)).unwrap_or(false) {
                ensure(pp(&f, &spec.pp(&f)), || format!("class 1 accepted a={a} b={b}, not a PP"))?;
                accepted += 1;
            }
        }
    }
    // Class 3: q = 8, d = 3, i2 = 1, ((1 - eps)/b)^3 = 1
    let f8 = field_for(8);
    let sys8 = coset_system(&f8, 3).unwrap();
    let w = f8.sub(Gf::ONE, sys8.epsilon);
    let mut c3 = 0;
    for b in f8.elements().skip(1) {
        if f8.pow(f8.div(w, b), 3) != Gf::ONE {
            continue;
        }
        let spec = SparseSpec::trinomial(3, 3, (0, 1), (1, 0), f8.neg(Gf::ONE), b);
        let v = class_n_check(&f8, &sys8, &spec, 3).map_err(|e| e.to_string())?;
        ensure(all_green(&v), || format!("class 3, b={b}: {v:?}"))?;
        ensure(pp(&f8, &spec.pp(&f8)), || format!("class 3, b={b}: oracle says not a PP"))?;
        c3 += 1;
    }
    ensure(c1 > 0 && c2 > 0 && c3 > 0, || format!("empty scan: {c1}/{c2}/{c3}"))?;
    Ok(format!("class 1: {c1} a, class 2: {c2} b, class 3: {c3} b; {accepted} (a, b) accepted by the class 1 check"))
}

fn class4_table() -> Outcome {
    let mut rows = std::collections::BTreeSet::new();
    let mut members = 0;
    for q in [5u64, 23, 11, 29, 47] {
        let f = field_for(q);
        let want_s = if q % 18 == 5 { 2 } else { 1 };
        for r in (1..=3 * q).filter(|&r| class4_admissible(q, r)) {
            for m in class4_generate(&f, r).map_err(|e| e.to_string())? {
                let g = m.spec.pp(&f);
                ensure(pp(&f, &g), || format!("q={q} r={r} {m:?} is not a PP"))?;
                let (u, s, c) = class4_normal_form(&f, &g).ok_or_else(|| format!("q={q} r={r}: no normal form"))?;
                ensure(s % 3 == want_s, || format!("q={q} r={r}: s = {s}, want {want_s} mod 3"))?;
                // rebuild u X^s (1 + c X^m - c^2 X^{2m}) independently
                let n = (q * q - 1) as usize;
                let m6 = n / 6;
                let rebuilt = Poly::from_terms(
                    &f,
                    &[(s as usize, u), ((s as usize + m6) % n, f.mul(u, c)), ((s as usize + 2 * m6) % n, f.neg(f.mul(u, f.mul(c, c))))],
                );
                ensure(rebuilt == g && f.in_mu(c, 6), || format!("q={q} r={r}: normal form does not rebuild f"))?;
                rows.insert((q % 18, r % 3));
                members += 1;
            }
        }
    }
    ensure(rows.len() == 6, || format!("table rows covered: {rows:?}"))?;
    Ok(format!("{members} members over 6 table rows, all PPs in normal form"))
}

fn binomial_equivalence() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for q in [5u64, 7] {
        let f = field_for(q);
        let sys = coset_system(&f, 1).unwrap();
        for a in f.mu_subgroup(q + 1).unwrap() {
            for l in 1..=q as usize {
                for r in (1..=2 * (q + 1)).filter(|&r| gcd(r as i64, q as i64 - 1) == 1) {
                    let spec = SparseSpec::binomial(r, 1, l, 0, a);
                    let v = binomial_check(&f, &sys, &spec).map_err(|e| e.to_string())?;
                    let truth = pp(&f, &pp_from_h(&f, &Poly::from_terms(&f, &[(0, Gf::ONE), (l, a)]), r));
                    ensure(v.pp == Some(truth), || format!("q={q} a={a} l={l} r={r}: verdict {:?}, oracle {truth}", v.pp))?;
                    n += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{n}/{n} agree, {:.2?}", start.elapsed()))
}

fn quadrinomial_instances() -> Outcome {
    let mut n = 0;
    for q in [5u64, 9, 13] {
        let f = field_for(q);
        let big = (q * q - 1) as usize;
        let q1 = q as usize - 1;
        let set = set_a(&f).unwrap();
        for r in (1..big as u64).filter(|&r| gcd(r as i64, q as i64 - 1) == 1 && gcd(r as i64 - 2, q as i64 + 1) == 1) {
            for &a in &set {
                let ru = r as usize;
                let g = Poly::from_terms(
                    &f,
                    &[
                        (ru, Gf::ONE),
                        ((ru + 2 * q1) % big, Gf::ONE),
                        ((ru + big / 2) % big, f.frobenius(a)),
                        // X^{(q+5)/2} in h; the expanded form printed with (q+5)(q-1) is not a PP
                        ((ru + (q as usize + 5) * q1 / 2) % big, a),
                    ],
                );
                ensure(g == split_quadrinomial(&f, r, a), || format!("q={q} r={r} a={a}: builder disagrees"))?;
                ensure(pp(&f, &g), || format!("q={q} r={r} a={a}: not a PP"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (q, r, a) instances, all PPs"))
}

fn self_dual_d1() -> Outcome {
    let mut n = 0;
    for q in [5u64, 7, 8, 9] {
        let f = field_for(q);
        let sys = coset_system(&f, 1).unwrap();
        let mu = f.mu_subgroup(q + 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        let rs: Vec<u64> = (1..q * q - 1).filter(|&r| gcd(r as i64, q as i64 - 1) == 1).collect();
        let mut done = 0;
        while done < 100 {
            let t = rng.gen_range(0..=q as usize);
            let lambda = mu[rng.gen_range(0..mu.len())];
            let Ok(fam) = LFamily::new(&f, &sys, 0, t, 0, lambda) else { continue };
            let Ok(h) = fam.sample(&f, &mut rng) else { continue };
            let ok_r: Vec<u64> = rs.iter().copied().filter(|&r| gcd(r as i64 - t as i64, q as i64 + 1) == 1).collect();
            if ok_r.is_empty() {
                continue;
            }
            let r = ok_r[rng.gen_range(0..ok_r.len())];
            ensure(h.self_dual_factor(&f).ok().flatten().is_some(), || format!("q={q}: sampled h is not self-dual"))?;
            ensure(pp(&f, &pp_from_h(&f, &h, r)), || format!("q={q} r={r} h={}: not a PP", h.to_text()))?;
            done += 1;
            n += 1;
        }
    }
    Ok(format!("{n} self-dual h, all PPs"))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "worked 47^2 example reproduces", example_54),
        (2, "forward fuzz gives PPs", forward_fuzz),
        (3, "profile round trip", round_trip),
        (4, "counting cross-checks", counting),
        (5, "size of the a-set is (q^2-1)/4", set_a_size),
        (6, "class 1-3 worked instances", worked_classes),
        (7, "class 4 table", class4_table),
        (8, "binomial criterion vs oracle", binomial_equivalence),
        (9, "split quadrinomial instances", quadrinomial_instances),
        (10, "self-dual h with d = 1", self_dual_d1),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let known = KNOWN_FAILURES.contains(&id);
        match out {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{t:.2?}]"),
            Err(why) => {
                let note = if known { " (known failure)" } else { "" };
                println!("criterion {id:>2} FAIL{note}  {name}: {why} [{t:.2?}]");
                unexpected += (!known) as u32;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
