//! Acceptance criteria, one PASS/FAIL line each. Runs under `cargo test` with
//! its own harness so the summary is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use genrest::genericity::genericity_reports;
use genrest::groups::{GroupFamily, ALL_FAMILIES};
use genrest::tables::{dixon_table, gl2_table};
use genrest::verify::{
    counterexample_check, multiplicity_one_suite, rodier_suite, structure_check, transfer_suite, GroupStore,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, format!("{what} took {took:?}, limit {limit:?}"))
}

fn counterexample(store: &GroupStore) -> Outcome {
    let mut notes = Vec::new();
    for q in [2u32, 3] {
        let start = Instant::now();
        let r = counterexample_check(store, q).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(10), &format!("q={q}"))?;
        check(r.pass, format!("q={q}: {:?}", r.failing_cells().collect::<Vec<_>>()))?;
        let degree = r.cells.iter().find(|c| c.input.starts_with("degree")).ok_or("no degree cell")?;
        check(degree.lhs == 2 * q as i64, format!("q={q}: degree {}", degree.lhs))?;
        let zero_cells: Vec<_> = r.cells.iter().filter(|c| c.psi.starts_with("psi(")).collect();
        check(!zero_cells.is_empty() && zero_cells.iter().all(|c| c.lhs == 0), format!("q={q}: nonzero Whittaker cell"))?;
        notes.push(format!("q={q}: degree {}, {} generic psi all 0", degree.lhs, zero_cells.len()));
    }
    Ok(notes.join("; "))
}

fn rodier(store: &GroupStore) -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2u32, 3] {
            let r = rodier_suite(store, family, q, None).map_err(|e| e.to_string())?;
            check(r.pass, format!("{family} q={q}: {:?}", r.failing_cells().collect::<Vec<_>>()))?;
            cells += r.cells.len();
        }
    }
    within(start, Duration::from_secs(300), "rodier")?;
    Ok(format!("{cells} (sigma, psi) cells equal"))
}

fn multiplicity_one(store: &GroupStore) -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2u32, 3] {
            let r = multiplicity_one_suite(store, family, q).map_err(|e| e.to_string())?;
            check(r.pass && r.cells.iter().all(|c| c.lhs == 1), format!("{family} q={q}"))?;
            cells += r.cells.len();
        }
    }
    within(start, Duration::from_secs(120), "multiplicity one")?;
    Ok(format!("{cells} principal-series cells with Whittaker dimension 1"))
}

fn transfer(store: &GroupStore) -> Outcome {
    let start = Instant::now();
    let r = transfer_suite(store, GroupFamily::Gsp4, 2, None).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(180), "transfer")?;
    check(r.pass, format!("{:?}", r.failing_cells().collect::<Vec<_>>()))?;
    let generic: Vec<_> = r.cells.iter().filter(|c| c.input.ends_with("generic constituents")).collect();
    check(!generic.is_empty(), "no cuspidal inputs")?;
    check(generic.iter().all(|c| c.lhs == 1), "some induced character lacks exactly one generic constituent")?;
    Ok(format!("{} (cuspidal sigma, psi) pairs with exactly one generic constituent", generic.len()))
}

fn tables() -> Outcome {
    let store = GroupStore::new(None);
    for q in [2u32, 3, 5] {
        let r = store.group(GroupFamily::Gl2, q).map_err(|e| e.to_string())?;
        let closed = gl2_table::<f64>(&r.group).map_err(|e| e.to_string())?;
        let dixon = dixon_table::<f64>(&r.group).map_err(|e| e.to_string())?;
        let (_, worst) = closed.match_up_to_permutation(&dixon).map_err(|e| e.to_string())?;
        check(worst < 1e-6, format!("q={q}: distance {worst}"))?;
        for t in [&closed, &dixon] {
            t.check_orthogonality(1e-8).map_err(|e| e.to_string())?;
            let sum: i64 = t.degrees().map_err(|e| e.to_string())?.iter().map(|d| d * d).sum();
            check(sum == r.group.order() as i64, format!("q={q}: sum of squares {sum}"))?;
        }
    }
    Ok("closed form equals Dixon for q = 2, 3, 5".into())
}

fn definitions(store: &GroupStore) -> Outcome {
    let mut n = 0;
    for family in ALL_FAMILIES {
        for q in [2u32, 3] {
            let red = store.group(family, q).map_err(|e| e.to_string())?;
            for r in genericity_reports(&red).map_err(|e| e.to_string())? {
                check(
                    r.generic == (r.adjoint_stabilizer_size == 1) && r.generic == r.coordinates_nonzero,
                    format!("{family} q={q} {}", r.psi),
                )?;
                n += 1;
            }
        }
    }
    Ok(format!("three criteria agree on {n} characters of U"))
}

fn structure(store: &GroupStore) -> Outcome {
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2u32, 3] {
            let r = structure_check(store, family, q).map_err(|e| e.to_string())?;
            check(r.pass, format!("{family} q={q}: {:?}", r.failing_cells().collect::<Vec<_>>()))?;
            let qq = q as u64;
            let formula = match family {
                GroupFamily::Gl2 => (qq * qq - 1) * (qq * qq - qq),
                _ => qq.pow(4) * (qq * qq - 1) * (qq.pow(4) - 1) * (qq - 1),
            };
            check(r.cells[0].lhs as u64 == formula, format!("{family} q={q}: order {}", r.cells[0].lhs))?;
        }
    }
    Ok("orders, class partitions and B meet w0 B w0^-1 = T".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_genrest"))
            .args(["verify", "suite"])
            .env("GENREST_CACHE", dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.code() == Some(0), format!("exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr)))?;
        Ok(out.stdout)
    };
    let first = run()?;
    let second = run()?;
    check(!first.is_empty() && first == second, "suite JSON differs between runs")?;
    Ok(format!("{} identical bytes (cold and warm cache)", first.len()))
}

fn main() {
    let store = GroupStore::new(None);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 counterexample", Box::new(|| counterexample(&store))),
        ("2 rodier", Box::new(|| rodier(&store))),
        ("3 multiplicity one", Box::new(|| multiplicity_one(&store))),
        ("4 genericity transfer", Box::new(|| transfer(&store))),
        ("5 table correctness", Box::new(tables)),
        ("6 definition equivalence", Box::new(|| definitions(&store))),
        ("7 structural oracles", Box::new(|| structure(&store))),
        ("8 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(|| run())) {
            Ok(o) => o,
            Err(_) => Err("panicked".into()),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS criterion {name} ({secs:.1}s): {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
