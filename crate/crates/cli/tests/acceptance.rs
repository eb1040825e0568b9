use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use msset::anodyne::{
    cofibration_generator, generator, leibniz_pretensor, AnodyneKind, CofibrationKind,
};
use msset::filtration::{
    remark_characterization, run_filtration, run_filtration_with, triviality_filtration, Limits,
};
use msset::harness::{run_suites, worked_example_table, Corpus, CorpusConfig, SuiteReport};
use msset::marking::{gadget, isomorphic_marked, pretensor, Gadget};
use msset::oracle::{literal_pretensor, literal_tensor, oracle_suite};
use msset::sset::NerveIndex;

type Check = Result<String, String>;

struct Criterion {
    number: u8,
    name: &'static str,
    limit: Duration,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn suite(corpus: &Corpus, name: &str) -> SuiteReport {
    run_suites(corpus, &[name.to_string()], false)
        .unwrap()
        .remove(0)
}

fn suite_verdict(rep: &SuiteReport) -> Check {
    if rep.ok() {
        Ok(format!("{} cases", rep.cases))
    } else {
        Err(format!(
            "{} of {} cases failed, first: {:?}",
            rep.failures.len(),
            rep.cases,
            rep.failures[0]
        ))
    }
}

fn worked_example() -> Check {
    // (x vertices, y vertices, marked under ⊠, marked under ⊗)
    let stated: [(&[usize], &[usize], bool, bool); 4] = [
        (&[1, 1, 2], &[0, 1, 1], true, true),
        (&[0, 1, 2, 2], &[0, 0, 0, 1], true, true),
        (&[0, 1, 2], &[0, 1, 1], false, true),
        (&[0, 1, 2], &[0, 0, 1], false, false),
    ];
    let x = gadget(&Gadget::DeltaT(2)).unwrap();
    let y = gadget(&Gadget::Delta(1)).unwrap();
    let (pre, ten) = (literal_pretensor(&x, &y), literal_tensor(&x, &y));
    let nerve = NerveIndex::new(&pre.underlying);
    let table = worked_example_table();
    for (row, (a, b, want_pre, want_ten)) in table.iter().zip(stated) {
        let vs: Vec<usize> = a.iter().zip(b).map(|(&i, &j)| i * 2 + j).collect();
        let c = nerve.cell(&vs).ok_or("example simplex missing")?;
        let literal = (pre.is_cell_marked(c), ten.is_cell_marked(c));
        if (row.pretensor, row.tensor) != (want_pre, want_ten) || literal != (want_pre, want_ten) {
            return Err(format!(
                "{} gives {row:?}, definitions {literal:?}",
                row.simplex
            ));
        }
    }
    Ok("4 simplices match under both markings".into())
}

fn characterization() -> Check {
    let mut cells = 0;
    for ell in -1..=1 {
        for m in 0..=2 {
            let r = remark_characterization(ell, m).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("({ell},{m}): {:?}", r.mismatches.first()));
            }
            cells += r.cells;
        }
    }
    Ok(format!("{cells} cells, both markings"))
}

fn filtrations() -> Check {
    let mut params: Vec<(isize, isize)> = (-1..=0)
        .flat_map(|ell| (0..=2).map(move |m| (ell, m)))
        .collect();
    if std::env::var_os("MSSET_ACCEPTANCE_FULL").is_some() {
        params.extend([(1, 0), (1, 1)]);
    }
    let limits = Limits::default();
    for &(ell, m) in &params {
        let cert = if ell <= 0 {
            run_filtration(ell, m)
        } else {
            run_filtration_with(ell, m, &limits)
        }
        .map_err(|e| e.to_string())?;
        for s in &cert.stages {
            if !(s.entire && s.verified && s.attachments.iter().all(|a| a.preserves_marking)) {
                return Err(format!("({ell},{m}) stage {}: {:?}", s.stage, s.failure));
            }
            let mut added = s.added.clone();
            let mut expected = s.expected.clone();
            added.sort();
            expected.sort();
            if added != expected {
                return Err(format!(
                    "({ell},{m}) stage {} adds {added:?}, classifier {expected:?}",
                    s.stage
                ));
            }
        }
        if !(cert.classifier_matches && cert.final_equals_target && cert.passed) {
            return Err(format!("({ell},{m}): final object differs from the tensor"));
        }
    }
    Ok(format!("{} parameter pairs", params.len()))
}

fn triviality() -> Check {
    let mut n = 0;
    for (p, big_n) in [(1, 0), (2, 1)] {
        for m in 0..=2 {
            let cert = triviality_filtration(p, m, big_n).map_err(|e| e.to_string())?;
            if !(cert.lower_dims_agree && cert.final_equals_target && cert.passed) {
                return Err(format!("(p,N,m) = ({p},{big_n},{m}): {cert:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn monoidal(corpus: &Corpus) -> Check {
    let rep = suite(corpus, "monoidal");
    suite_verdict(&rep)?;
    let note = rep
        .notes
        .iter()
        .find(|n| n.starts_with("pretensor not associative"))
        .ok_or("no pretensor counterexample recorded")?;
    let d1 = gadget(&Gadget::Delta(1)).unwrap();
    let left = pretensor(&pretensor(&d1, &d1), &d1);
    let right = pretensor(&d1, &pretensor(&d1, &d1));
    if isomorphic_marked(&left, &right) {
        return Err("Δ[1] triple is associative under ⊠".into());
    }
    Ok(format!("{} cases; recorded: {note}", rep.cases))
}

fn entire_pushouts() -> Check {
    let mut n = 0;
    for (m, k) in [(2, 0), (2, 1), (2, 2), (3, 1)] {
        let f = generator(AnodyneKind::Thinness, &[m, k]).unwrap().realized;
        for d in 1..=3 {
            let g = cofibration_generator(CofibrationKind::Marking, d).unwrap();
            for (a, b) in [(&f, &g), (&g, &f)] {
                let l = leibniz_pretensor(a, b).map_err(|e| e.to_string())?;
                if !l.is_isomorphism() {
                    return Err(format!(
                        "thinness ({m},{k}) with marking inclusion of Δ[{d}]"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} Leibniz maps"))
}

fn oracles(corpus: &Corpus) -> Check {
    let rep = oracle_suite(corpus, 100_000);
    suite_verdict(&rep)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn cli(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_msset"))
        .args(args)
        .output()
        .unwrap();
    String::from_utf8(out.stdout).unwrap()
}

fn determinism() -> Check {
    let canonical = golden("expressions.txt");
    for file in ["expressions_input.txt", "expressions.txt"] {
        let text = golden(file);
        let mut args = vec!["print"];
        args.extend(text.lines());
        if cli(&args) != canonical {
            return Err(format!("print of {file} differs from the golden forms"));
        }
    }
    let simplex = "([0 1 2 3 3 3],[0 0 0 0 1 2])";
    for (format, file) in [("ascii", "diagram_pi32.txt"), ("svg", "diagram_pi32.svg")] {
        let out = cli(&[
            "diagram",
            "prod(delta 3, delta 2)",
            "--simplex",
            simplex,
            "--format",
            format,
        ]);
        if out != golden(file) {
            return Err(format!("{file} differs"));
        }
    }
    for _ in 0..2 {
        if cli(&["verify", "filtration", "-1", "0"]) != golden("filtration_-1_0.json") {
            return Err("filtration certificate differs".into());
        }
    }
    Ok("round-trips, diagrams and certificate byte-equal".into())
}

fn main() {
    let corpus = Corpus::new(&CorpusConfig::default());
    let criteria: Vec<(Criterion, Box<dyn Fn() -> Check + '_>)> = vec![
        (
            Criterion {
                number: 1,
                name: "worked-example fidelity",
                limit: secs(1),
            },
            Box::new(worked_example),
        ),
        (
            Criterion {
                number: 2,
                name: "marking inclusion",
                limit: secs(60),
            },
            Box::new(|| suite_verdict(&suite(&corpus, "equivalent_tensors"))),
        ),
        (
            Criterion {
                number: 3,
                name: "degeneracy-index characterization",
                limit: secs(120),
            },
            Box::new(characterization),
        ),
        (
            Criterion {
                number: 4,
                name: "filtration certificates",
                limit: secs(300),
            },
            Box::new(filtrations),
        ),
        (
            Criterion {
                number: 5,
                name: "triviality filtration",
                limit: secs(60),
            },
            Box::new(triviality),
        ),
        (
            Criterion {
                number: 6,
                name: "duality suite",
                limit: secs(60),
            },
            Box::new(|| suite_verdict(&suite(&corpus, "op_duality"))),
        ),
        (
            Criterion {
                number: 7,
                name: "monoidal suite",
                limit: secs(300),
            },
            Box::new(|| monoidal(&corpus)),
        ),
        (
            Criterion {
                number: 8,
                name: "entire-pushout isomorphism",
                limit: secs(10),
            },
            Box::new(entire_pushouts),
        ),
        (
            Criterion {
                number: 9,
                name: "oracle equivalence",
                limit: secs(300),
            },
            Box::new(|| oracles(&corpus)),
        ),
        (
            Criterion {
                number: 10,
                name: "CLI determinism",
                limit: secs(60),
            },
            Box::new(determinism),
        ),
    ];
    let mut failed = Vec::new();
    for (c, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= c.limit => Ok(detail),
            Ok(detail) => Err(format!("{detail}, but took longer than {:?}", c.limit)),
            Err(e) => Err(e),
        };
        match &verdict {
            Ok(detail) => println!(
                "PASS {:>2} {}: {detail} ({:.2} s)",
                c.number,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                println!(
                    "FAIL {:>2} {}: {detail} ({:.2} s)",
                    c.number,
                    c.name,
                    elapsed.as_secs_f64()
                );
                failed.push(c.number);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
