use std::fmt::Write as _;
use std::fs;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use sorites_lab::covers::CoverEntry;
use sorites_lab::harness::{run_continuous, run_covering, run_discrete, DiscreteSoritesSpec, PiPredicate, SigmaPredicate};
use sorites_lab::measurement::{holder_phi, holder_phi_real, PositiveDyadics, PositiveRationals};
use sorites_lab::{
    creep, decode, encode, singular_cover, Cover, GodelIndex, MachineProgram, Numbering, Rational, RunOutcome,
    SoritesReport, SpeckerSequence,
};

use crate::{Cli, Command, CoverCommand, Format, MachineCommand, SoritesCommand, Structure};

pub fn dispatch(cli: &Cli) -> Result<String> {
    let cap = cli.budget_cap;
    let check = |budget: u64| -> Result<()> {
        ensure!(budget <= cap, "budget {budget} exceeds the cap {cap} (SORITES_LAB_BUDGET_CAP)");
        Ok(())
    };
    match &cli.command {
        Command::Specker(a) => {
            let seq = sequence(&a.f, a.budget, check)?;
            specker(&seq, &a.f, a.n, a.format)
        }
        Command::Cover(CoverCommand::Singular(a)) => {
            check(a.budget)?;
            let cover = singular_cover(&Numbering::canonical(), a.budget, a.terms)?;
            emit_cover(&cover, a.format)
        }
        Command::Creep(a) => {
            let text = fs::read_to_string(&a.cover).with_context(|| format!("reading {}", a.cover.display()))?;
            let entries: Vec<CoverEntry> = serde_json::from_str(&text).context("parsing cover")?;
            let cover = Cover::from_entries(entries)?;
            let walk = creep(&cover, cover.len(), a.max_steps);
            match a.format {
                Format::Json => json(&walk),
                Format::Csv => {
                    let mut out = String::from("step,index,lo,hi\n");
                    for (step, &i) in walk.chain.iter().enumerate() {
                        let iv = &cover.intervals()[i];
                        writeln!(out, "{step},{i},{},{}", iv.lo(), iv.hi())?;
                    }
                    Ok(out)
                }
                Format::Text => Ok(format!(
                    "status: {:?}\nfrontier: {}\nchain: {:?}\n",
                    walk.status, walk.frontier, walk.chain
                )),
            }
        }
        Command::Holder(a) => {
            let x: Rational = parse_rational(&a.a, "--a")?;
            let unit: Rational = parse_rational(&a.unit, "--unit")?;
            let r: Rational = parse_rational(&a.r, "--r")?;
            ensure!(r.is_positive(), "--r must be positive");
            let phi = match a.structure {
                Structure::Qplus => holder_phi(&PositiveRationals, &x, &unit, &r, a.k as usize, cap)?,
                Structure::Dyadic => holder_phi(&PositiveDyadics, &x, &unit, &r, a.k as usize, cap)?,
            };
            #[derive(Serialize)]
            struct Out<'a> {
                structure: &'a str,
                a: &'a Rational,
                unit: &'a Rational,
                r: &'a Rational,
                k: u32,
                phi: Rational,
            }
            let structure = match a.structure {
                Structure::Qplus => "qplus",
                Structure::Dyadic => "dyadic",
            };
            match a.format {
                Format::Json => json(&Out { structure, a: &x, unit: &unit, r: &r, k: a.k, phi }),
                Format::Text => Ok(format!("{phi}\n")),
                Format::Csv => {
                    // Coded-real approximants q_0..q_k of the normalized measure.
                    let real = match a.structure {
                        Structure::Qplus => holder_phi_real(Arc::new(PositiveRationals), x, unit, r)?,
                        Structure::Dyadic => holder_phi_real(Arc::new(PositiveDyadics), x, unit, r)?,
                    };
                    Ok(real.to_csv(a.k))
                }
            }
        }
        Command::Sorites(SoritesCommand::Discrete(a)) => {
            let spec = DiscreteSoritesSpec {
                start_height: parse_rational(&a.start, "--start")?,
                increment: parse_rational(&a.delta, "--delta")?,
                steps: a.steps,
                threshold: parse_rational(&a.threshold, "--threshold")?,
            };
            report(&run_discrete(&spec)?, a.format)
        }
        Command::Sorites(SoritesCommand::Continuous(a)) => {
            let p = match (a.f.as_str(), a.plant_delay) {
                ("halting", plant) => {
                    check(a.budget)?;
                    let mut numbering = Numbering::canonical();
                    if let Some(t) = plant {
                        numbering = numbering.with_plant(0, MachineProgram::delay(t));
                    }
                    SigmaPredicate::live(numbering, a.budget)
                }
                (f, None) => SigmaPredicate::new(sequence(f, a.budget, check)?),
                (_, Some(_)) => bail!("--plant-delay needs --f halting"),
            };
            report(&run_continuous(&p, a.k, a.terms), a.format)
        }
        Command::Sorites(SoritesCommand::Covering(a)) => {
            check(a.budget)?;
            let p = PiPredicate {
                cover: Cover::singular(&Numbering::canonical(), a.budget),
            };
            report(&run_covering(&p, a.terms, a.max_steps, a.pairs), a.format)
        }
        Command::Machine(MachineCommand::Run(a)) => {
            check(a.budget)?;
            let program = load_program(&a.program)?;
            let outcome = program.run(a.input, a.budget);
            match a.format {
                Format::Json => json(&outcome),
                Format::Csv => Ok(match outcome {
                    RunOutcome::Halted { output, steps } => format!("status,output,steps\nhalted,{output},{steps}\n"),
                    RunOutcome::OutOfBudget => "status,output,steps\nout_of_budget,,\n".into(),
                }),
                Format::Text => Ok(match outcome {
                    RunOutcome::Halted { output, steps } => format!("halted with output {output} after {steps} steps\n"),
                    RunOutcome::OutOfBudget => format!("no halt within {} steps\n", a.budget),
                }),
            }
        }
        Command::Machine(MachineCommand::Encode(a)) => Ok(format!("{}\n", encode(&load_program(&a.program)?))),
        Command::Machine(MachineCommand::Decode(a)) => {
            let code: GodelIndex = a.code.parse().with_context(|| format!("invalid code {:?}", a.code))?;
            Ok(decode(&code).to_text())
        }
    }
}

fn parse_rational(s: &str, flag: &str) -> Result<Rational> {
    s.parse().with_context(|| format!("invalid rational {s:?} for {flag}"))
}

fn sequence(f: &str, budget: u64, check: impl Fn(u64) -> Result<()>) -> Result<SpeckerSequence> {
    if f == "identity" {
        return Ok(SpeckerSequence::identity());
    }
    if f == "halting" {
        check(budget)?;
        return Ok(SpeckerSequence::halting(&Numbering::canonical(), budget));
    }
    let Some(values) = f.strip_prefix("stub:") else {
        bail!("unknown enumeration {f:?}; expected identity, stub:V,V,... or halting");
    };
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<u64>().with_context(|| format!("invalid stub value {v:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpeckerSequence::stub(values)?)
}

fn specker(seq: &SpeckerSequence, f: &str, n: usize, format: Format) -> Result<String> {
    let mut rows = Vec::new();
    for i in 0..=n {
        let s = seq.term(i)?;
        rows.push((i, seq.f(i).expect("term exists"), s));
    }
    match format {
        Format::Csv => {
            let mut out = String::from("n,s_n\n");
            for (i, _, s) in &rows {
                writeln!(out, "{i},{s}")?;
            }
            Ok(out)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                n: usize,
                f: u64,
                s: &'a Rational,
            }
            #[derive(Serialize)]
            struct Out<'a> {
                f: &'a str,
                terms: Vec<Row<'a>>,
            }
            let terms = rows.iter().map(|(n, f, s)| Row { n: *n, f: *f, s }).collect();
            json(&Out { f, terms })
        }
        Format::Text => {
            let mut out = String::new();
            for (i, fv, s) in &rows {
                writeln!(out, "s_{i} = {s}  (f({i}) = {fv})")?;
            }
            Ok(out)
        }
    }
}

fn emit_cover(cover: &Cover, format: Format) -> Result<String> {
    let entries = cover.entries();
    match format {
        Format::Json => json(&entries),
        Format::Csv => {
            let mut out = String::from("index,lo,hi\n");
            for e in &entries {
                writeln!(out, "{},{},{}", e.index, e.lo, e.hi)?;
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for e in &entries {
                writeln!(out, "O_{} = ({}, {})", e.index, e.lo, e.hi)?;
            }
            Ok(out)
        }
    }
}

fn report(report: &SoritesReport, format: Format) -> Result<String> {
    match format {
        Format::Json => json(report),
        Format::Text => Ok(report.to_string()),
        Format::Csv => {
            let mut out = String::from("premise,point,precision,outcome\n");
            for p in &report.premises {
                let point = p.point.as_ref().map(ToString::to_string).unwrap_or_default();
                let precision = p.precision.map(|b| b.to_string()).unwrap_or_default();
                writeln!(out, "\"{}\",{point},{precision},{:?}", p.premise.replace('"', "'"), p.outcome)?;
            }
            Ok(out)
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// A program file in the text format, or a decimal code.
fn load_program(arg: &str) -> Result<MachineProgram> {
    if !arg.is_empty() && arg.bytes().all(|b| b.is_ascii_digit()) {
        let code: GodelIndex = arg.parse().context("invalid code")?;
        return Ok(decode(&code));
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    Ok(text.parse()?)
}
