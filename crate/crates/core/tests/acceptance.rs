// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Each criterion runs against brute-force oracles built
//! here, independently of the engines under test, and prints one line.

use std::collections::{BTreeSet, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use propforge::circuit::{build_sorter, random_circuit, RandomCircuitShape};
use propforge::compspec::{
    check_complete, comp_spec, sorter_spec, ClauseStatus, CompSpecConfig, CompSpecOutcome,
    InformalOracle, Mode, Specification,
};
use propforge::formula::all_assignments;
use propforge::quant::{
    clean_solution, is_pqe_solution, partial_qe, quant_eliminate, split_clause,
    split_on_all_assignments, PqeProblem, QuantProblem,
};
use propforge::quickpqe::{
    check_single_test, quick_pqe, split_problem, QuickPqeError, QuickPqeOutcome,
};
use propforge::satcore::{implies_formula, Solver};
use propforge::seq::{
    counter, diameter, gen_safety_property, make_inv, model_check, random_machine, reachable,
    transition_relation, unroll, MachineShape, MakeInvOutcome, McOutcome, SequentialCircuit,
};
use propforge::{Assignment, Circuit, Clause, Cnf, Limits, Lit, Var, VarTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn random_cnf(rng: &mut ChaCha8Rng, n: usize, clauses: usize, width: usize) -> Cnf {
    let mut f = Cnf::new(VarTable::anonymous(n));
    while f.len() < clauses {
        let w = rng.gen_range(1..=width);
        let lits = (0..w).map(|_| Lit::new(Var::from_index(rng.gen_range(0..n)), rng.gen()));
        if let Ok(c) = Clause::new(lits) {
            f.push(c).unwrap();
        }
    }
    f
}

fn random_subset(rng: &mut ChaCha8Rng, vars: &[Var], max: usize) -> Vec<Var> {
    let mut out: Vec<Var> = vars.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    out.truncate(max);
    out
}

/// `∃W[f]` at `v` by enumerating every full assignment.
fn brute_projection(f: &Cnf, free: &[Var]) -> BTreeSet<u64> {
    let all: Vec<Var> = f.table().vars().collect();
    all_assignments(&all)
        .filter(|a| f.evaluate(a).is_true())
        .map(|a| a.to_bits(free).unwrap())
        .collect()
}

fn same_on(f: &Cnf, free: &[Var], projected: &BTreeSet<u64>) -> bool {
    all_assignments(free)
        .all(|v| f.evaluate(&v).is_true() == projected.contains(&v.to_bits(free).unwrap()))
}

// ---------------------------------------------------------------- 1

fn tseitin_fidelity() -> Check {
    let c = Circuit::parse(&std::fs::read_to_string(fixtures().join("and.net")).unwrap()).unwrap();
    let f = c.tseitin().cnf;
    let shown: Vec<String> = f.clauses().iter().map(|cl| f.display_clause(cl)).collect();
    ensure(shown == ["v1 -v3", "v2 -v3", "-v1 -v2 v3"], || {
        format!("AND template {shown:?}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut points = 0;
    for k in 0..200 {
        let shape = RandomCircuitShape {
            inputs: rng.gen_range(1..=8),
            gates: rng.gen_range(1..=25),
            outputs: rng.gen_range(1..=3),
        };
        let c = random_circuit(&mut rng, shape);
        let f = c.tseitin().cnf;
        let rest: Vec<Var> = f
            .table()
            .vars()
            .filter(|v| !c.inputs().contains(v))
            .collect();
        for x in all_assignments(c.inputs()) {
            let sim = c.simulate(&x).unwrap();
            ensure(f.evaluate(&sim.values).is_true(), || {
                format!("circuit {k}: simulation falsifies F")
            })?;
            // no other extension of x satisfies F
            let mut g = f.clone();
            g.push(Clause::maxterm(&sim.values.restrict(&rest), &rest).unwrap())
                .unwrap();
            ensure(!Solver::new(&g).solve(&x.lits()).is_sat(), || {
                format!("circuit {k}: second extension of an input")
            })?;
            points += 1;
        }
    }
    Ok(format!(
        "AND template exact, 200 circuits, {points} input points"
    ))
}

// ---------------------------------------------------------------- 2

fn qe_pqe_soundness() -> Check {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for k in 0..500 {
        let n = rng.gen_range(1..=12);
        let clauses = rng.gen_range(0..=2 * n);
        let f = random_cnf(&mut rng, n, clauses, 3);
        let all: Vec<Var> = f.table().vars().collect();
        let free = random_subset(&mut rng, &all, 10);
        let q = quant_eliminate(&QuantProblem::new(f.clone(), &free).unwrap(), &lim).unwrap();
        ensure(same_on(&q, &free, &brute_projection(&f, &free)), || {
            format!("QE instance {k}")
        })?;
    }
    for k in 0..300 {
        let n = rng.gen_range(2..=10);
        let clauses = rng.gen_range(1..=2 * n);
        let f = random_cnf(&mut rng, n, clauses, 3);
        let all: Vec<Var> = f.table().vars().collect();
        let free = random_subset(&mut rng, &all, 8);
        let mut take: BTreeSet<usize> = (0..f.len()).filter(|_| rng.gen_bool(0.3)).collect();
        if take.is_empty() {
            take.insert(rng.gen_range(0..f.len()));
        }
        let p = PqeProblem::new(f.clone(), take, &free).unwrap();
        let q = partial_qe(&p, &lim).unwrap();
        ensure(is_pqe_solution(&p, &q, &lim).unwrap(), || {
            format!("PQE instance {k}")
        })?;
        // H1* ∧ ∃W[H2] ≡ ∃W[H1 ∧ H2]
        let whole = brute_projection(&f, &free);
        let rest = brute_projection(&p.h2(), &free);
        let ok = all_assignments(&free).all(|v| {
            let bits = v.to_bits(&free).unwrap();
            (q.evaluate(&v).is_true() && rest.contains(&bits)) == whole.contains(&bits)
        });
        ensure(ok, || format!("PQE instance {k}: brute check"))?;
    }
    Ok("500 QE, 300 PQE".into())
}

// ---------------------------------------------------------------- 3

fn quickpqe_correctness() -> Check {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut done, mut properties) = (0, 0);
    while done < 300 {
        let shape = RandomCircuitShape {
            inputs: rng.gen_range(1..=6),
            gates: rng.gen_range(2..=20),
            outputs: rng.gen_range(1..=3),
        };
        let c = random_circuit(&mut rng, shape);
        let enc = c.tseitin();
        let clause = rng.gen_range(0..enc.cnf.len().max(1));
        let test: Assignment = c.inputs().iter().map(|&x| (x, rng.gen())).collect();
        let run = match quick_pqe(&c, &enc, clause, &test) {
            Ok(run) => run,
            Err(QuickPqeError::ClauseNotGateClause(_) | QuickPqeError::ClauseTouchesInputs(_)) => {
                continue
            }
            Err(e) => return Err(format!("triple {done}: {e}")),
        };
        ensure(run.gate_evals <= 2 * c.gates().len(), || {
            format!(
                "triple {done}: {} gate evaluations for {} gates",
                run.gate_evals,
                c.gates().len()
            )
        })?;
        let p = split_problem(&c, &enc, clause, &test).unwrap();
        let q = run.outcome.solution(&enc);
        ensure(is_pqe_solution(&p, &q, &lim).unwrap(), || {
            format!("triple {done}: not a PQE solution")
        })?;
        if let QuickPqeOutcome::Property { q, .. } = &run.outcome {
            properties += 1;
            let report = check_single_test(q, &c, &test, &lim).unwrap();
            ensure(report.holds(), || {
                format!("triple {done}: single-test conditions {report:?}")
            })?;
        }
        done += 1;
    }
    Ok(format!("300 triples, {properties} property outcomes"))
}

// ---------------------------------------------------------------- 4

fn splitting_laws() -> Check {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for k in 0..200 {
        let n = rng.gen_range(2..=10);
        let vars: Vec<Var> = (0..n).map(Var::from_index).collect();
        let mut order = vars.clone();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let width = rng.gen_range(0..n);
        let c = Clause::new(order[..width].iter().map(|&v| Lit::new(v, rng.gen()))).unwrap();
        let extra = rng.gen_range(1..=n - width);
        let lits: Vec<Lit> = order[width..width + extra]
            .iter()
            .map(|&v| Lit::new(v, rng.gen()))
            .collect();
        let parts = split_clause(&c, &lits).map_err(|e| format!("split {k}: {e}"))?;
        let ok = all_assignments(&vars)
            .all(|a| c.eval(&a).is_true() == parts.iter().all(|p| p.eval(&a).is_true()));
        ensure(ok && parts.len() == lits.len() + 1, || {
            format!("split {k} not equivalent")
        })?;
    }
    let mut done = 0;
    while done < 100 {
        let ins = rng.gen_range(1..=4);
        let shape = RandomCircuitShape {
            inputs: ins,
            gates: rng.gen_range(1..=8),
            outputs: rng.gen_range(1..=(6 - ins).min(2)),
        };
        let c = random_circuit(&mut rng, shape);
        let f = c.tseitin().cnf;
        let io: Vec<Var> = c.inputs().iter().chain(c.outputs()).copied().collect();
        let v = random_subset(&mut rng, &io, 4);
        if v.is_empty() {
            continue;
        }
        let projected = quant_eliminate(&QuantProblem::new(f.clone(), &v).unwrap(), &lim).unwrap();
        let kept = projected
            .clauses()
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .cloned();
        let q = Cnf::from_clauses(f.table().clone(), kept).unwrap();
        let g =
            split_on_all_assignments(&f, &v, &q).map_err(|e| format!("full split {done}: {e}"))?;
        let all: Vec<Var> = f.table().vars().collect();
        ensure(
            all_assignments(&all).all(|a| g.formula.evaluate(&a) == f.evaluate(&a)),
            || format!("full split {done}: G differs from F"),
        )?;
        if !g.g1.is_empty() {
            let p = g.pqe_problem(&v).unwrap();
            ensure(is_pqe_solution(&p, &q, &lim).unwrap(), || {
                format!("full split {done}: Q rejected")
            })?;
        } else {
            ensure(q.is_empty(), || {
                format!("full split {done}: empty G1 with non-trivial Q")
            })?;
        }
        done += 1;
    }
    Ok("200 splits, 100 full splits".into())
}

// ---------------------------------------------------------------- 5 and 6

fn io_vars(c: &Circuit) -> Vec<Var> {
    c.inputs().iter().chain(c.outputs()).copied().collect()
}

/// Every per-clause cleaned PQE property is implied by `spec`.
fn recheck_structural(spec: &Specification, c: &Circuit, free: &[Var]) -> Result<usize, String> {
    let lim = Limits::default();
    let f = c.tseitin().cnf;
    let conj = spec.conjunction().with_table(f.table().clone()).unwrap();
    for i in 0..f.len() {
        let p = PqeProblem::new(f.clone(), [i].into(), free).unwrap();
        let q = clean_solution(&partial_qe(&p, &lim).unwrap(), &p.h2());
        ensure(implies_formula(&conj, &q), || {
            format!("clause {i} property not implied")
        })?;
    }
    Ok(f.len())
}

fn sorter_scenario() -> Check {
    let lim = Limits::default();
    let config = CompSpecConfig::default();
    for r in [1, 2] {
        let good = build_sorter(r, 2, false).unwrap();
        let bad = build_sorter(r, 2, true).unwrap();
        let full = sorter_spec(&good, r, 2, &lim).unwrap();
        let mut sorted_only = Specification::new(full.table().clone());
        sorted_only.push(full.properties()[0].clone());
        ensure(full.properties()[0].name == "sorted", || {
            "first sorter property".into()
        })?;

        let mut oracle = InformalOracle::GoldenModel(good.clone());
        let out = comp_spec(&sorted_only, &bad, &io_vars(&bad), &mut oracle, &config)
            .map_err(|e| format!("r={r} buggy: {e}"))?;
        let CompSpecOutcome::Unwanted {
            property,
            witness: Some(w),
            ..
        } = out
        else {
            return Err(format!("r={r}: buggy sorter not caught"));
        };
        // the witness is a golden behavior that the property excludes
        let x: Assignment = w
            .inputs
            .iter()
            .map(|(n, b)| (good.net(n).unwrap(), *b))
            .collect();
        let z = good.simulate(&x).unwrap().outputs;
        let shown: Vec<(String, bool)> = z
            .iter()
            .map(|(v, b)| (good.name(v).to_string(), b))
            .collect();
        ensure(shown == w.outputs, || {
            format!("r={r}: witness is not the golden response")
        })?;
        let mut point = x.clone();
        for (v, b) in z.iter() {
            point.set(v, b);
        }
        ensure(property.evaluate(&point).is_false(), || {
            format!("r={r}: witness satisfies property")
        })?;

        let mut oracle = InformalOracle::GoldenModel(good.clone());
        let out = comp_spec(&full, &good, &io_vars(&good), &mut oracle, &config)
            .map_err(|e| format!("r={r} correct: {e}"))?;
        let CompSpecOutcome::StructurallyComplete { spec, report } = out else {
            return Err(format!("r={r}: correct sorter flagged"));
        };
        ensure(
            report.iter().all(|c| c.status == ClauseStatus::Implied),
            || format!("r={r}: additions"),
        )?;
        ensure(spec.properties().len() == 2, || format!("r={r}: spec grew"))?;
        let comp = check_complete(&spec, &good, &io_vars(&good), &lim).unwrap();
        ensure(comp.complete, || {
            format!("r={r}: not functionally complete")
        })?;
    }
    Ok("r=1,m=2 and r=2,m=2".into())
}

fn structural_recheck() -> Check {
    let lim = Limits::default();
    let mut checked = 0;
    let mut runs = 0;
    for r in [1, 2] {
        let good = build_sorter(r, 2, false).unwrap();
        let spec = sorter_spec(&good, r, 2, &lim).unwrap();
        let mut oracle = InformalOracle::AcceptAll;
        let out = comp_spec(
            &spec,
            &good,
            &io_vars(&good),
            &mut oracle,
            &CompSpecConfig::default(),
        )
        .unwrap();
        let CompSpecOutcome::StructurallyComplete { spec, .. } = out else {
            unreachable!()
        };
        checked += recheck_structural(&spec, &good, &io_vars(&good))
            .map_err(|e| format!("sorter r={r}: {e}"))?;
        runs += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for k in 0..30 {
        let shape = RandomCircuitShape {
            inputs: rng.gen_range(1..=4),
            gates: rng.gen_range(1..=10),
            outputs: rng.gen_range(1..=2),
        };
        let c = random_circuit(&mut rng, shape);
        let empty = Specification::new(c.table().clone());
        let free = io_vars(&c);
        for mode in [Mode::Expansion, Mode::QuickSplit] {
            let config = CompSpecConfig {
                mode,
                ..CompSpecConfig::default()
            };
            let out = comp_spec(&empty, &c, &free, &mut InformalOracle::AcceptAll, &config)
                .map_err(|e| format!("circuit {k}: {e}"))?;
            let CompSpecOutcome::StructurallyComplete { spec, report } = out else {
                return Err(format!("circuit {k}: accept-all returned unwanted"));
            };
            let conj = spec.conjunction();
            for rec in &report {
                ensure(implies_formula(&conj, &rec.property), || {
                    format!("circuit {k}: record {}", rec.clause)
                })?;
            }
            if mode == Mode::Expansion {
                checked += recheck_structural(&spec, &c, &free)
                    .map_err(|e| format!("circuit {k}: {e}"))?;
            }
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} complete outcomes, {checked} clause properties rechecked, 0 failures"
    ))
}

// ---------------------------------------------------------------- 7

/// Reachable states by explicit BFS over full simulation, with distances.
fn bfs_oracle(m: &SequentialCircuit) -> Vec<Option<usize>> {
    let states = m.states();
    let k = states.len();
    let core = m.core();
    let mut dist = vec![None; 1 << k];
    let mut queue = VecDeque::new();
    for s in 0..1u64 << k {
        if m.init()
            .evaluate(&Assignment::from_bits(&states, s))
            .is_true()
        {
            dist[s as usize] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        let d = dist[s as usize].unwrap();
        for x in all_assignments(m.inputs()) {
            let mut a = Assignment::from_bits(&states, s);
            for (v, b) in x.iter() {
                a.set(v, b);
            }
            let values = core.simulate(&a).unwrap().values;
            let t = values.to_bits(&m.next_states()).unwrap();
            if dist[t as usize].is_none() {
                dist[t as usize] = Some(d + 1);
                queue.push_back(t);
            }
        }
    }
    dist
}

fn within(dist: &[Option<usize>], n: usize) -> BTreeSet<u64> {
    (0..dist.len() as u64)
        .filter(|&s| dist[s as usize].is_some_and(|d| d <= n))
        .collect()
}

fn sequential_suite() -> Check {
    let lim = Limits::default();
    let mut machines: Vec<(String, SequentialCircuit)> = vec![
        ("mod-3".into(), counter(2, 3)),
        ("mod-4".into(), counter(2, 4)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for bits in [3, 5, 8] {
        let shape = MachineShape {
            state_bits: bits,
            inputs: rng.gen_range(1..=2),
            gates: 2 * bits + 2,
        };
        machines.push((format!("random-{bits}"), random_machine(&mut rng, shape)));
    }
    let mut props = 0;
    for (name, m) in &machines {
        let m = m.add_stuttering().map_err(|e| format!("{name}: {e}"))?;
        let dist = bfs_oracle(&m);
        let ecc = dist.iter().flatten().copied().max().unwrap();
        let all = within(&dist, usize::MAX);

        for n in 0..=ecc + 1 {
            let r = reachable(&m, Some(n), &lim).map_err(|e| format!("{name} n={n}: {e}"))?;
            ensure(r.states == within(&dist, n), || {
                format!("{name}: QE reach differs at n={n}")
            })?;
        }
        let fix = reachable(&m, None, &lim).unwrap();
        ensure(fix.states == all, || format!("{name}: fixpoint reach"))?;

        let t = transition_relation(&m, &lim).unwrap();
        let over_next =
            quant_eliminate(&QuantProblem::new(t, &m.next_states()).unwrap(), &lim).unwrap();
        ensure(over_next.is_empty(), || format!("{name}: ∃S[T] is not 1"))?;

        let d = diameter(&m, &lim).unwrap();
        ensure(d == ecc, || {
            format!("{name}: diameter {d}, BFS eccentricity {ecc}")
        })?;

        let n = d.max(1);
        let clauses = unroll(&m, n).unwrap().formula.len();

        for clause in 0..clauses {
            let q = gen_safety_property(&m, n, clause, &lim).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                model_check(&m, &q, &lim).unwrap() == McOutcome::Holds,
                || format!("{name}: property from clause {clause} fails"),
            )?;
            props += 1;
        }
    }

    let m4 = counter(2, 4).add_stuttering().unwrap();
    let s = m4.states();
    let q0 = Cnf::from_clauses(
        m4.core().table().clone(),
        [Clause::new([s[0].neg(), s[1].neg()]).unwrap()],
    )
    .unwrap();
    ensure(
        make_inv(&m4, &q0, &lim).unwrap() == MakeInvOutcome::Trivial,
        || "mod-4 makeInv".into(),
    )?;
    let m3 = counter(2, 3).add_stuttering().unwrap();
    let s = m3.states();
    let q0 = Cnf::from_clauses(
        m3.core().table().clone(),
        [Clause::new([s[0].neg(), s[1].neg()]).unwrap()],
    )
    .unwrap();
    ensure(
        make_inv(&m3, &q0, &lim).unwrap() == MakeInvOutcome::Invariant(q0.clone()),
        || "mod-3 makeInv".into(),
    )?;
    Ok(format!(
        "{} machines, {props} generated properties hold",
        machines.len()
    ))
}

// ---------------------------------------------------------------- 8

const CLI_SCRIPT: &[&[&str]] = &[
    &["encode", "nor2.net", "-o", "nor2.cnf"],
    &["encode", "and.net"],
    &["simulate", "nor2.net", "--input", "01"],
    &["qe", "xyz.cnf", "--free", "x,z"],
    &["qe", "nor2.cnf", "--free", "x1,x2,z1", "-o", "nor2.qe"],
    &["pqe", "nor2.cnf", "--take", "6", "--free", "x1,x2,z1"],
    &[
        "pqe", "nor2.cnf", "--take", "6", "--free", "x1,x2,z1", "--clean", "-o", "nor2.pqe",
    ],
    &["quickpqe", "nor2.net", "--clause", "6", "--test", "00"],
    &["quickpqe", "nor2.net", "--clause", "6", "--test", "10"],
    &["quickpqe", "nor2.net", "--clause", "0", "--test", "00"],
    &[
        "sorter",
        "--bits",
        "1",
        "--count",
        "2",
        "-o",
        "good.net",
        "--spec-out",
        "sort.props",
    ],
    &[
        "sorter", "--bits", "1", "--count", "2", "--buggy", "-o", "bad.net",
    ],
    &[
        "sorter",
        "--bits",
        "2",
        "--count",
        "2",
        "-o",
        "good2.net",
        "--spec-out",
        "sort2.props",
    ],
    &[
        "compspec",
        "bad.net",
        "--spec",
        "sorted.props",
        "--golden",
        "good.net",
    ],
    &[
        "compspec",
        "good.net",
        "--spec",
        "sort.props",
        "--golden",
        "good.net",
        "-o",
        "spec.out",
    ],
    &[
        "compspec",
        "good2.net",
        "--spec",
        "sort2.props",
        "--accept-all",
        "--mode",
        "quicksplit",
    ],
    &[
        "compspec",
        "nor2.net",
        "--spec",
        "empty.props",
        "--accept-all",
        "-o",
        "nor2.props",
    ],
    &["complete", "good.net", "--spec", "sorted.props"],
    &["complete", "good.net", "--spec", "sort.props"],
    &["reach", "m3.seq", "--stutter"],
    &["reach", "m3.seq", "--stutter", "-n", "1"],
    &["reach", "m3.seq"],
    &["diameter", "m4.seq", "--stutter"],
    &["unroll", "m3.seq", "-n", "2", "-o", "m3.unrolled"],
    &["genprop", "m3.seq", "--stutter", "-n", "3", "--clause", "5"],
    &["makeinv", "m3.seq", "--stutter", "--prop", "not_both.props"],
    &["makeinv", "m4.seq", "--stutter", "--prop", "not_both.props"],
    &["qe", "missing.cnf", "--free", "x"],
];

fn cli_transcript() -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    std::fs::write(dir.path().join("empty.props"), "").unwrap();
    let mut out = Vec::new();
    for args in CLI_SCRIPT {
        let o = Command::new(env!("CARGO_BIN_EXE_propforge"))
            .args(*args)
            .current_dir(dir.path())
            .env_remove("PROPFORGE_MAX_FREE")
            .output()
            .map_err(|e| e.to_string())?;
        out.extend(format!("$ {}\nexit {:?}\n", args.join(" "), o.status.code()).bytes());
        out.extend(o.stdout);
        out.extend(o.stderr);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    for p in files {
        out.extend(format!("== {}\n", p.file_name().unwrap().to_string_lossy()).bytes());
        out.extend(std::fs::read(&p).unwrap());
    }
    Ok(out)
}

fn cli_determinism() -> Check {
    let first = cli_transcript()?;
    let second = cli_transcript()?;
    ensure(first == second, || "transcripts differ between runs".into())?;
    Ok(format!(
        "{} invocations, {} transcript bytes",
        CLI_SCRIPT.len(),
        first.len()
    ))
}

// ----------------------------------------------------------------

fn main() {
    type Criterion = (&'static str, fn() -> Check, Option<u64>);
    let criteria: [Criterion; 8] = [
        ("tseitin fidelity", tseitin_fidelity, Some(10)),
        ("QE/PQE soundness", qe_pqe_soundness, Some(60)),
        ("QuickPQE correctness", quickpqe_correctness, Some(60)),
        ("clause-splitting laws", splitting_laws, Some(60)),
        ("sorter scenario", sorter_scenario, Some(30)),
        ("structural completeness recheck", structural_recheck, None),
        ("sequential suite", sequential_suite, Some(120)),
        ("CLI determinism", cli_determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map_or(String::new(), |s| format!(", limit {s} s"));
        let (verdict, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {verdict} ({:.2} s{limit_text}) {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
