//! Acceptance criteria 1–9. Runs as a plain binary and prints one line per
//! criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{all_matrices, binomial, random_hypergraph, random_simple_g, random_split_case, rebuild, rng, v};
use hyperdetach::audit::{audit_cumulative, audit_step};
use hyperdetach::cli::run_with_env;
use hyperdetach::design::{check_necessary, DesignSpec, FactorSpec, MatrixProblem, Refusal};
use hyperdetach::detach::{detach, detach_step, AlphaOrder, Detacher, DetachmentState};
use hyperdetach::factorize::{almost_factorize, qr_factorize, r_factorize, FactorizeError};
use hyperdetach::hypergraph::{EdgeId, HingeId, Hypergraph, NumberFunction, VertexId, VertexMultiset};
use hyperdetach::io::parse_hypergraph;
use hyperdetach::laminar::{brute_force_split, fair_split};
use hyperdetach::verify::{verify_detachment, verify_factorization};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Verdict {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/example21.json"))
        .map_err(|e| e.to_string())?;
    let g = parse_hypergraph(&text).map_err(|e| e.to_string())?;
    let e = EdgeId;
    let h = |edge: u32, ordinal: u32| HingeId::new(EdgeId(edge), ordinal);
    let set = |xs: &[HingeId]| xs.iter().copied().collect::<BTreeSet<_>>();
    let ms = |xs: &[(u32, u32)]| VertexMultiset::from_counts(xs.iter().map(|&(x, m)| (v(x), m)));
    let mut checked = 0;
    let mut check = |name: &str, ok: bool| {
        checked += 1;
        ensure(ok, || format!("{name} does not match"))
    };
    check("|e1| = 3", g.edge_size(e(1)).unwrap() == 3)?;
    check("|e2| = 2", g.edge_size(e(2)).unwrap() == 2)?;
    check("|e3| = 1", g.edge_size(e(3)).unwrap() == 1)?;
    check("d(v1) = 2", g.degree(v(1)).unwrap() == 2)?;
    check("d(v3) = 2", g.degree(v(3)).unwrap() == 2)?;
    check("d(v2) = 1", g.degree(v(2)).unwrap() == 1)?;
    check("d(v4) = 1", g.degree(v(4)).unwrap() == 1)?;
    check("d(v5) = 1", g.degree(v(5)).unwrap() == 1)?;
    check("H(v1)", g.hinge_set(v(1), None).unwrap() == set(&[h(1, 0), h(1, 1)]))?;
    check("H(v2)", g.hinge_set(v(2), None).unwrap() == set(&[h(1, 2)]))?;
    check("H(v3)", g.hinge_set(v(3), None).unwrap() == set(&[h(1, 3), h(2, 0)]))?;
    check("H(v3,e1)", g.hinge_set(v(3), Some(e(1))).unwrap() == set(&[h(1, 3)]))?;
    check("H(v3,e2)", g.hinge_set(v(3), Some(e(2))).unwrap() == set(&[h(2, 0)]))?;
    check("H(v3,e3)", g.hinge_set(v(3), Some(e(3))).unwrap().is_empty())?;
    check("E({v1,v2,v3})", g.edges_joining(&ms(&[(1, 1), (2, 1), (3, 1)])).is_empty())?;
    let e1: BTreeSet<EdgeId> = [e(1)].into();
    check("E({v1^2,v2,v3})", g.edges_joining(&ms(&[(1, 2), (2, 1), (3, 1)])) == e1)?;
    check(
        "E(v1^2,{v2,v3})",
        g.edges_joining(&ms(&[(1, 2)]).union(&ms(&[(2, 1), (3, 1)]))) == e1,
    )?;
    check("m(v1,v2,v3) = 0", g.multiplicity(&ms(&[(1, 1), (2, 1), (3, 1)])) == 0)?;
    check("m(v1^2,v2,v3) = 1", g.multiplicity(&ms(&[(1, 2), (2, 1), (3, 1)])) == 1)?;
    check(
        "H(v1^2,{v2,v3})",
        g.hinges_toward(v(1), 2, &ms(&[(2, 1), (3, 1)])) == set(&[h(1, 0), h(1, 1)]),
    )?;
    check("H(v1,{v2,v3})", g.hinges_toward(v(1), 1, &ms(&[(2, 1), (3, 1)])).is_empty())?;
    check("H(v3,{v1^2,v2})", g.hinges_toward(v(3), 1, &ms(&[(1, 2), (2, 1)])) == set(&[h(1, 3)]))?;
    Ok(format!("{checked} query values match"))
}

fn criterion_2() -> Verdict {
    let mut r = rng(2);
    let mut largest = 0;
    for case in 0..1000 {
        let c = random_split_case(&mut r, 18, 12, 6);
        largest = largest.max(c.ground.len());
        let cert = fair_split(&c.ground, &c.a, &c.b, c.n).map_err(|e| format!("case {case}: {e}"))?;
        ensure(cert.is_valid(), || format!("case {case}: certificate has violations"))?;
        let z = &cert.subset;
        ensure(z.is_subset(&c.ground), || format!("case {case}: subset leaves the ground set"))?;
        let mut all: Vec<&BTreeSet<usize>> = c.a.sets().iter().chain(c.b.sets()).collect();
        all.push(&c.ground);
        for p in all {
            let hit = p.intersection(z).count();
            let (lo, hi) = (p.len() / c.n, p.len().div_ceil(c.n));
            ensure(lo <= hit && hit <= hi, || format!("case {case}: |Z ∩ P| = {hit} outside [{lo}, {hi}]"))?;
        }
        let brute = brute_force_split(&c.ground, &c.a, &c.b, c.n).map_err(|e| format!("case {case}: {e}"))?;
        ensure(brute.is_some(), || format!("case {case}: exhaustive search found no split"))?;
    }
    Ok(format!("1000 instances, ground sets up to {largest} elements"))
}

fn criterion_3() -> Verdict {
    let mut r = rng(3);
    let mut hinges = 0;
    for case in 0..500 {
        let f = random_hypergraph(&mut r, 6, 40, 4, 4);
        let g = random_simple_g(&mut r, &f, 4);
        let (out, psi) = detach(&f, &g).map_err(|e| format!("case {case}: {e}"))?;
        let report = verify_detachment(&f, &out, &psi, &g);
        ensure(report.passed, || {
            let names: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
            format!("case {case}: failed {names:?}")
        })?;
        let back = out.amalgamate(&psi).map_err(|e| format!("case {case}: {e}"))?;
        ensure(back == f, || format!("case {case}: re-amalgamation differs"))?;
        hinges += f.num_hinges();
    }
    Ok(format!("500 detachments ({hinges} hinges) verified and re-amalgamated"))
}

fn base_instances() -> Vec<(Hypergraph, NumberFunction)> {
    let build = |vertices: &[u32], groups: &[(&[u32], [u32; 4])]| {
        let mut g = Hypergraph::colored(2).with_vertices(vertices.iter().map(|&x| v(x))).unwrap();
        let mut id = 0;
        for (hinges, colors) in groups {
            for &c in colors {
                g.add_edge(EdgeId(id), hinges.iter().map(|&x| v(x)), Some(c)).unwrap();
                id += 1;
            }
        }
        g
    };
    let number = |g: &Hypergraph, at0: u32| {
        NumberFunction::new(g.vertices().map(|x| (x, if x == v(0) { at0 } else { 1 })).collect()).unwrap()
    };
    let alt = [1, 2, 1, 2];
    let a = build(&[0, 1], &[(&[0, 0], alt), (&[0, 1], alt)]);
    let b = build(&[0, 2], &[(&[0, 0], [1; 4]), (&[0, 2], [2; 4])]);
    let c = build(&[0, 1, 2], &[(&[0, 1], alt), (&[0, 2], alt), (&[1, 2], alt)]);
    let d = build(&[0, 1], &[(&[0, 0, 1], alt), (&[0, 1], alt)]);
    vec![
        (a.clone(), number(&a, 2)),
        (b.clone(), number(&b, 4)),
        (c.clone(), number(&c, 2)),
        (d.clone(), number(&d, 2)),
    ]
}

#[derive(Clone, Copy, Debug)]
enum Mutation {
    DoubleHinge,
    Overload,
    Underload,
    ColorSwap,
    MultiplicityShift,
}

/// Applies `m` to `next`, the legal result of splitting `alpha` into
/// `alpha` and `fresh`. `None` if the mutation has no place to apply.
fn mutate(next: &Hypergraph, alpha: VertexId, fresh: VertexId, m: Mutation) -> Option<Hypergraph> {
    let edges: Vec<(EdgeId, Vec<VertexId>, Option<u32>)> =
        next.edges().map(|(id, e)| (id, e.hinges().to_vec(), e.color())).collect();
    let with_fresh = |e: &&(EdgeId, Vec<VertexId>, Option<u32>)| e.1.contains(&fresh);
    let replace = |target: EdgeId, from: VertexId, to: VertexId| {
        rebuild(next, |id, mut hinges, color| {
            if id == target {
                let i = hinges.iter().position(|&x| x == from).unwrap();
                hinges[i] = to;
            }
            (hinges, color)
        })
    };
    match m {
        Mutation::DoubleHinge => {
            let (id, hinges, _) = edges.iter().find(|e| with_fresh(e) && e.1.iter().any(|&x| x != fresh))?;
            let other = *hinges.iter().find(|&&x| x != fresh)?;
            Some(replace(*id, other, fresh))
        }
        Mutation::Overload => {
            let (id, _, _) = edges.iter().find(|e| !with_fresh(e) && e.1.contains(&alpha))?;
            Some(replace(*id, alpha, fresh))
        }
        Mutation::Underload => {
            let (id, _, _) = edges.iter().find(with_fresh)?;
            Some(replace(*id, fresh, alpha))
        }
        Mutation::ColorSwap => {
            let k = next.num_colors()?;
            let (target, _, _) = edges.iter().find(with_fresh)?;
            Some(rebuild(next, |id, hinges, color| {
                let color = if id == *target { color.map(|c| c % k + 1) } else { color };
                (hinges, color)
            }))
        }
        Mutation::MultiplicityShift => {
            let sig = |h: &[VertexId]| VertexMultiset::from_vertices(h.iter().copied());
            for x in edges.iter().filter(with_fresh) {
                for y in edges.iter().filter(|e| !with_fresh(e) && e.1.contains(&alpha)) {
                    let mut xh = x.1.clone();
                    let i = xh.iter().position(|&w| w == fresh).unwrap();
                    xh[i] = alpha;
                    let mut yh = y.1.clone();
                    let j = yh.iter().position(|&w| w == alpha).unwrap();
                    yh[j] = fresh;
                    let mut before = [sig(&x.1), sig(&y.1)];
                    let mut after = [sig(&xh), sig(&yh)];
                    before.sort();
                    after.sort();
                    if before != after {
                        let (xi, yi) = (x.0, y.0);
                        return Some(rebuild(next, |id, hinges, color| {
                            if id == xi {
                                (xh.clone(), color)
                            } else if id == yi {
                                (yh.clone(), color)
                            } else {
                                (hinges, color)
                            }
                        }));
                    }
                }
            }
            None
        }
    }
}

fn criterion_4() -> Verdict {
    let mut r = rng(4);
    let mut instances = 0usize;
    for case in 0..100 {
        let f = random_hypergraph(&mut r, 6, 40, 4, 4);
        let g = random_simple_g(&mut r, &f, 4);
        let order = if case % 2 == 0 {
            AlphaOrder::SmallestFirst
        } else {
            AlphaOrder::Seeded(case)
        };
        let run = Detacher::new(order, true).run(&f, &g).map_err(|e| format!("run {case}: {e}"))?;
        for audit in &run.audits {
            instances += audit.checks.len();
            if let Some(bad) = audit.failures().next() {
                return Err(format!("run {case} step {}: {} {} failed", audit.step, bad.condition, bad.instance));
            }
        }
        let expected = g.excess() as usize;
        ensure(run.audits.len() == expected, || format!("run {case}: {} audits for {expected} splits", run.audits.len()))?;
    }

    let kinds = [
        Mutation::DoubleHinge,
        Mutation::Overload,
        Mutation::Underload,
        Mutation::ColorSwap,
        Mutation::MultiplicityShift,
    ];
    let mut caught = 0;
    for (b, (f, g)) in base_instances().into_iter().enumerate() {
        let prev = DetachmentState::new(f.clone(), g).map_err(|e| e.to_string())?;
        let alpha = v(0);
        let next = detach_step(&prev, alpha).map_err(|e| e.to_string())?;
        let fresh = next.graph.vertices().find(|w| !f.has_vertex(*w)).ok_or("no fresh vertex")?;
        ensure(audit_step(&prev, &next, alpha).passed(), || format!("base {b}: legal step fails audit"))?;
        for kind in kinds {
            let graph = mutate(&next.graph, alpha, fresh, kind).ok_or_else(|| format!("base {b}: {kind:?} not applicable"))?;
            let bad = DetachmentState { graph, ..next.clone() };
            let step = audit_step(&prev, &bad, alpha);
            let cumulative = audit_cumulative(&f, &bad);
            ensure(!step.passed() || !cumulative.passed(), || format!("base {b}: {kind:?} not caught"))?;
            caught += 1;
        }
    }
    ensure(caught == 20, || format!("only {caught} of 20 mutations caught"))?;
    Ok(format!("100 audited runs ({instances} checks pass); 20 of 20 mutations caught"))
}

fn criterion_5() -> Verdict {
    let mut successes = 0;
    let mut refusals = 0;
    for n in 1..=8u64 {
        for h in 1..=4u64.min(n) {
            let spec = DesignSpec::complete(n, vec![h], vec![1]);
            let degree = binomial(n - 1, h - 1);
            for r in 1..=4u64 {
                let expected = (r * n) % h == 0 && degree.is_multiple_of(r);
                let ks: Vec<u64> = if degree.is_multiple_of(r) {
                    vec![degree / r]
                } else {
                    [degree / r, degree / r + 1].into_iter().filter(|&k| k >= 1).collect()
                };
                for k in ks {
                    let rs = vec![r; k as usize];
                    match r_factorize(&spec, &rs) {
                        Ok(f) => {
                            ensure(expected, || format!("n={n} h={h} r={r}: succeeded but should not"))?;
                            let report = verify_factorization(&f, &spec, &FactorSpec::regular(rs.clone()));
                            ensure(report.passed, || format!("n={n} h={h} r={r}: output fails verification"))?;
                            successes += 1;
                        }
                        Err(FactorizeError::Refused(_)) => {
                            ensure(!expected, || format!("n={n} h={h} r={r}: refused but should succeed"))?;
                            refusals += 1;
                        }
                        Err(e) => return Err(format!("n={n} h={h} r={r}: {e}")),
                    }
                }
            }
        }
    }
    Ok(format!("{successes} factorizations verified, {refusals} refusals, all as predicted"))
}

fn criterion_6() -> Verdict {
    let spec = DesignSpec::complete(6, vec![2, 3], vec![1, 1]);
    let fs = FactorSpec::regular(vec![5, 5, 5]);
    ensure(spec.degree() == Some(15), || "degree is not 15".into())?;
    let f = r_factorize(&spec, &fs.r).map_err(|e| e.to_string())?;
    let report = verify_factorization(&f, &spec, &fs);
    ensure(report.passed, || "factorization fails verification".into())?;
    let problem = MatrixProblem::new(&spec, &fs).map_err(|e| e.to_string())?;
    let all = all_matrices(&problem.sizes, &problem.column_sums, &problem.row_lower, &problem.row_upper);
    ensure(!all.is_empty(), || "exhaustive search finds no matrix".into())?;
    ensure(all.contains(&f.matrix.rows), || "solver matrix not among exhaustive solutions".into())?;
    ensure(all[0] == f.matrix.rows, || format!("solver matrix {:?} is not the first {:?}", f.matrix.rows, all[0]))?;
    Ok(format!("A = {:?}; {} matrices exist", f.matrix.rows, all.len()))
}

fn criterion_7() -> Verdict {
    let mut successes = 0;
    let mut refusals = 0;
    for n in 2..=5u64 {
        for p in 1..=3u64 {
            for h in 2..=3u64.min(n) {
                let spec = DesignSpec::partite(n, p, vec![h], vec![1]);
                let degree = binomial(n - 1, h - 1) * p.pow(h as u32 - 1);
                for r in 1..=3u64 {
                    let expected = (n * p * r) % h == 0 && degree.is_multiple_of(r);
                    let ks: Vec<u64> = if degree.is_multiple_of(r) {
                        vec![degree / r]
                    } else {
                        [degree / r, degree / r + 1].into_iter().filter(|&k| k >= 1).collect()
                    };
                    for k in ks {
                        let rs = vec![r; k as usize];
                        match r_factorize(&spec, &rs) {
                            Ok(f) => {
                                ensure(expected, || format!("n={n} p={p} h={h} r={r}: succeeded"))?;
                                let report = verify_factorization(&f, &spec, &FactorSpec::regular(rs.clone()));
                                ensure(report.passed, || format!("n={n} p={p} h={h} r={r}: fails verification"))?;
                                successes += 1;
                            }
                            Err(FactorizeError::Refused(_)) => {
                                ensure(!expected, || format!("n={n} p={p} h={h} r={r}: refused"))?;
                                refusals += 1;
                            }
                            Err(e) => return Err(format!("n={n} p={p} h={h} r={r}: {e}")),
                        }
                    }
                }
            }
        }
    }
    let mut unequal = 0;
    for n in 2..=4u64 {
        let total = 3u64.pow(n as u32);
        for code in 0..total {
            let parts: Vec<u64> = (0..n).map(|i| code / 3u64.pow(i as u32) % 3 + 1).collect();
            if parts.iter().all(|&x| x == parts[0]) {
                continue;
            }
            for h in 2..=n.min(3) {
                let spec = DesignSpec::with_parts(n, parts.clone(), vec![h], vec![1]);
                for rs in [vec![1], vec![1, 1], vec![2, 1, 3]] {
                    match r_factorize(&spec, &rs) {
                        Err(FactorizeError::Refused(Refusal::UnequalPartSizes { .. })) => unequal += 1,
                        other => return Err(format!("parts {parts:?}: expected refusal, got {:?}", other.map(|_| ()))),
                    }
                }
            }
        }
    }
    Ok(format!("{successes} verified, {refusals} refused as predicted; {unequal} unequal-part specs refused"))
}

fn criterion_8() -> Verdict {
    let mut checked = 0;
    let mut built = 0;
    let mut run = |spec: &DesignSpec, fs: FactorSpec, almost: bool, oracle: bool| -> Result<(), String> {
        let necessary = check_necessary(spec, &fs).map_err(|e| e.to_string())?.passed();
        let expected = necessary && oracle;
        let result = if almost {
            almost_factorize(spec, &fs.r)
        } else {
            qr_factorize(spec, fs.lower(), &fs.r)
        };
        let label = || format!("{spec:?} Q={:?} R={:?}", fs.lower(), fs.r);
        checked += 1;
        match result {
            Ok(f) => {
                ensure(expected, || format!("{} succeeded against the oracle", label()))?;
                let report = verify_factorization(&f, spec, &fs);
                ensure(report.passed, || format!("{} fails interval checks", label()))?;
                built += 1;
            }
            Err(FactorizeError::Refused(_)) => ensure(!expected, || format!("{} refused", label()))?,
            Err(e) => return Err(format!("{}: {e}", label())),
        }
        Ok(())
    };

    for n in 1..=8u64 {
        for h in 1..=4u64.min(n) {
            let spec = DesignSpec::complete(n, vec![h], vec![1]);
            let degree = binomial(n - 1, h - 1);
            let edges = binomial(n, h);
            for r in 1..=4u64 {
                let first = degree.div_ceil(r).saturating_sub(1).max(1);
                for q in 0..=r {
                    let last = if q == 0 { first + 3 } else { degree / q + 1 };
                    for k in first..=last {
                        let k = k as usize;
                        let fs = FactorSpec::interval(vec![q; k], vec![r; k]);
                        let oracle = common::single_size_feasible(h, edges, &vec![n * q; k], &vec![n * r; k]);
                        run(&spec, fs, false, oracle)?;
                    }
                }
                for k in first..=degree.div_ceil(r.saturating_sub(1).max(1)) + 1 {
                    let k = k as usize;
                    let fs = FactorSpec::almost(vec![r; k]).unwrap();
                    let oracle = common::single_size_feasible(h, edges, &vec![n * (r - 1); k], &vec![n * r; k]);
                    run(&spec, fs, true, oracle)?;
                }
            }
        }
    }

    for n in 3..=5u64 {
        let spec = DesignSpec::complete(n, vec![2, 3], vec![1, 1]);
        let columns = [binomial(n, 2), binomial(n, 3)];
        let max_k = if n == 5 { 3 } else { 4 };
        for k in 1..=max_k {
            for r in 1..=4u64 {
                for q in 0..=r {
                    let fs = FactorSpec::interval(vec![q; k], vec![r; k]);
                    let oracle = !all_matrices(&[2, 3], &columns, &vec![n * q; k], &vec![n * r; k]).is_empty();
                    run(&spec, fs, false, oracle)?;
                }
            }
        }
    }
    Ok(format!("{checked} specs match the oracle; {built} factorizations pass interval checks"))
}

fn cli(args: &[&str], dir: &Path) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hyperdetach".to_string()];
    argv.extend(args.iter().map(|a| a.replace("{dir}", dir.to_str().unwrap())));
    let code = run_with_env(argv, false, &mut out, &mut err);
    (code, out, err)
}

fn criterion_9() -> Verdict {
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = work.path();
    let example = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/example21.json");
    std::fs::copy(&example, dir.join("example.json")).map_err(|e| e.to_string())?;
    std::fs::write(dir.join("g.json"), r#"{"1":2,"2":1,"3":2,"4":3,"5":2}"#).map_err(|e| e.to_string())?;
    std::fs::write(
        dir.join("split.json"),
        r#"{"ground":[1,2,3,4,5,6,7],"familyA":[[1,2],[1,2,3],[5,6]],"familyB":[[2,3,4],[6,7]],"n":3}"#,
    )
    .map_err(|e| e.to_string())?;
    let setup: &[&[&str]] = &[
        &["factorize", "--n", "6", "--H", "2,3", "--lambda", "1,1", "--R", "5,5,5", "-o", "{dir}/f.json"],
        &["generate", "--n", "4", "--p", "2", "--H", "2,3", "--lambda", "1,1", "-o", "{dir}/d.json"],
        &["detach", "-i", "{dir}/example.json", "--g", "{dir}/g.json", "--seed", "5", "-o", "{dir}/x.json"],
    ];
    for args in setup {
        let (code, _, err) = cli(args, dir);
        ensure(code == 0, || format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)))?;
    }
    let surface: &[&[&str]] = &[
        &["generate", "--n", "5", "--H", "2,3", "--lambda", "2,1"],
        &["generate", "--n", "3", "--p", "2", "--H", "2", "--lambda", "1"],
        &["detach", "-i", "{dir}/example.json", "--g", "{dir}/g.json"],
        &["detach", "-i", "{dir}/example.json", "--g", "{dir}/g.json", "--seed", "17", "--audit"],
        &["detach", "-i", "{dir}/example.json", "--g", "4", "--seed", "3"],
        &["factorize", "--n", "4", "--H", "2", "--lambda", "1", "--R", "1,1,1"],
        &["factorize", "--n", "6", "--H", "2,3", "--lambda", "1,1", "--R", "5,5,5", "--seed", "9"],
        &["factorize", "--n", "3", "--p", "2", "--H", "2", "--lambda", "1", "--R", "2,2", "--seed", "1"],
        &["factorize", "--n", "5", "--H", "3", "--lambda", "1", "--R", "4,4", "--Q", "1,1"],
        &["factorize", "--n", "5", "--H", "2", "--lambda", "1", "--R", "1,1,1,1,1", "--almost", "--seed", "2"],
        &["factorize", "--n", "5", "--H", "2", "--lambda", "1", "--R", "1,1,1,1"],
        &["factorize", "--n", "3", "--parts", "1,2,2", "--H", "2", "--lambda", "1", "--R", "4"],
        &["verify", "factorization", "-i", "{dir}/f.json"],
        &["verify", "design", "-i", "{dir}/d.json"],
        &["verify", "detachment", "--original", "{dir}/example.json", "--detached", "{dir}/x.json", "--g", "{dir}/g.json"],
        &["split", "-i", "{dir}/split.json"],
        &["detach", "-i", "{dir}/missing.json", "--g", "1"],
    ];
    for args in surface {
        let first = cli(args, dir);
        let second = cli(args, dir);
        ensure(first == second, || format!("{args:?} differs between runs"))?;
    }
    let bin = env!("CARGO_BIN_EXE_hyperdetach");
    let args = ["factorize", "--n", "6", "--H", "3", "--lambda", "1", "--R", "2,2,2,2,2", "--seed", "11"];
    let a = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    let b = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    ensure(a.status.success() && a.stdout == b.stdout && a.stderr == b.stderr, || "binary runs differ".into())?;
    Ok(format!("{} in-process invocations and 1 binary invocation repeat byte for byte", surface.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict, Duration); 9] = [
        ("example hypergraph queries", criterion_1, Duration::from_secs(1)),
        ("laminar split oracle equivalence", criterion_2, Duration::from_secs(60)),
        ("detachment theorem suite", criterion_3, Duration::from_secs(300)),
        ("step-audit suite", criterion_4, Duration::from_secs(600)),
        ("complete uniform factorizations", criterion_5, Duration::from_secs(120)),
        ("mixed-size instance", criterion_6, Duration::from_secs(60)),
        ("multipartite factorizations", criterion_7, Duration::from_secs(600)),
        ("(Q,R) and almost factorizations", criterion_8, Duration::from_secs(600)),
        ("determinism", criterion_9, Duration::from_secs(600)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {label}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {label}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
