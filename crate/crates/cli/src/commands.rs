use std::fs::File;
use std::io::{self, BufWriter, Write};

use ksumlab::elimination::{fourteenth_quadratic, residual_relations, second_root};
use ksumlab::search::Searcher;
use ksumlab::symfunc::fixture::{check_against_fixtures, load_reference_fixtures, render_identities};
use ksumlab::{
    e_expansion, e_expansion_unreduced, e_power_sums, ksums as ksum_multiset, power_sum_vector,
    CoefficientCheck, Error, Family, NumberMultiset, Rational, Result, SearchSpec,
};
use serde_json::json;

use crate::input::{rational_json, rationals_json, read_one_set, read_sets};
use crate::{EliminateArgs, ExpandArgs, Format, SearchArgs};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;

fn verdict(ok: bool) -> u8 {
    if ok {
        OK
    } else {
        NEGATIVE
    }
}

pub fn ksums(arg: &str, k: usize, format: Format) -> Result<u8> {
    for set in read_sets(arg)? {
        let sums = ksum_multiset(&set, k)?;
        match format {
            Format::Text => println!("{}", sums.to_literal()),
            Format::Json => println!(
                "{}",
                json!({ "n": set.len(), "k": k, "count": sums.len(), "sums": rationals_json(sums.sums()) })
            ),
        }
    }
    Ok(OK)
}

pub fn collide(args: &[String], k: usize, format: Format) -> Result<u8> {
    let mut sets = Vec::new();
    for arg in args {
        sets.extend(read_sets(arg)?);
    }
    let [a, b] = <[NumberMultiset; 2]>::try_from(sets)
        .map_err(|s| Error::Parse(format!("collide needs exactly two sets, got {}", s.len())))?;
    if a.len() != b.len() {
        return Err(Error::Parse(format!("sets differ in size ({} vs {})", a.len(), b.len())));
    }
    let (x, y) = (ksum_multiset(&a, k)?, ksum_multiset(&b, k)?);
    let diff = x.first_difference(&y);
    let show = |v: Option<&Rational>| v.map_or_else(|| "-".to_string(), Rational::to_string);
    match (format, diff) {
        (Format::Text, None) => println!("EQUAL ({} sums)", x.len()),
        (Format::Text, Some((i, p, q))) => {
            println!("DIFFERENT at sorted position {}: {} vs {}", i + 1, show(p), show(q))
        }
        (Format::Json, None) => println!("{}", json!({ "equal": true, "count": x.len() })),
        (Format::Json, Some((i, p, q))) => println!(
            "{}",
            json!({
                "equal": false,
                "count": x.len(),
                "position": i + 1,
                "first": p.map(rational_json),
                "second": q.map(rational_json),
            })
        ),
    }
    Ok(verdict(diff.is_none()))
}

fn print_checks(checks: &[CoefficientCheck], format: Format) -> bool {
    for c in checks {
        match format {
            Format::Text => println!("{c}"),
            Format::Json => println!(
                "{}",
                json!({
                    "monomial": c.monomial.to_string(),
                    "got": rational_json(&c.got),
                    "expected": rational_json(&c.expected),
                    "ok": c.ok(),
                })
            ),
        }
    }
    checks.iter().all(CoefficientCheck::ok)
}

pub fn expand(args: &ExpandArgs, format: Format) -> Result<u8> {
    let k = args.k.unwrap_or(4);
    let n = args.n.unwrap_or(12);
    if args.all {
        print!("{}", render_identities(k, n, args.pmax)?);
        return Ok(OK);
    }
    let p = args.p.ok_or_else(|| Error::BadRange("missing p".into()))?;
    if args.check_paper {
        if (k, n) != (4, 12) {
            return Err(Error::BadSpec("--check-paper covers k = 4, n = 12 only".into()));
        }
        let checks = check_against_fixtures(p, &load_reference_fixtures()?)?;
        return Ok(verdict(print_checks(&checks, format)));
    }
    let poly = if args.unreduced {
        e_expansion_unreduced(p, k, n, args.s1zero)?
    } else {
        e_expansion(p, k, n, args.s1zero)?
    };
    match format {
        Format::Text => println!("E{p} = {poly}"),
        Format::Json => println!(
            "{}",
            json!({ "p": p, "k": k, "n": n, "s1zero": args.s1zero, "polynomial": poly.to_string() })
        ),
    }
    Ok(OK)
}

fn centred_twelve(arg: &str) -> Result<NumberMultiset> {
    let set = read_one_set(arg)?;
    if set.len() != 12 {
        return Err(Error::BadSpec(format!("elimination needs 12 elements, got {}", set.len())));
    }
    let shift = -(set.sum() / Rational::from_integer(12.into()));
    if shift == Rational::from_integer(0.into()) {
        return Ok(set);
    }
    eprintln!("note: shifted by {shift} so that S1 = 0");
    Ok(set.affine(&Rational::from_integer(1.into()), &shift))
}

pub fn eliminate(args: &EliminateArgs, format: Format) -> Result<u8> {
    if args.verify_coefficients {
        let checks = fourteenth_quadratic()?.verify_coefficients();
        return Ok(verdict(print_checks(&checks, format)));
    }
    if args.example1 {
        let a: NumberMultiset = "-1 0^10 1".parse()?;
        let e_values = e_power_sums(&a, 4, 14)?.bindings(Family::E);
        let quadratic = fourteenth_quadratic()?.at(&e_values)?;
        let Some(roots) = quadratic.rational_roots() else {
            println!("no rational roots (discriminant {})", quadratic.discriminant());
            return Ok(NEGATIVE);
        };
        match format {
            Format::Text => println!("roots: {}", roots.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")),
            Format::Json => println!("{}", json!({ "roots": rationals_json(&roots) })),
        }
        return Ok(OK);
    }
    if let Some(arg) = &args.second_root {
        let sv = power_sum_vector(&centred_twelve(arg)?, 12);
        let other = second_root(&sv)?;
        let first = sv.get(6);
        match format {
            Format::Text => {
                println!("S6' = {first}");
                println!("S6'' = {other}{}", if &other == first { " (self-dual)" } else { "" });
            }
            Format::Json => println!(
                "{}",
                json!({ "s6_first": rational_json(first), "s6_second": rational_json(&other) })
            ),
        }
        return Ok(OK);
    }
    if let Some(arg) = &args.residuals {
        let sv = power_sum_vector(&centred_twelve(arg)?, 12);
        let residuals = residual_relations(&sv, 26)?;
        for r in &residuals {
            match format {
                Format::Text => println!("E{}: {}", r.equation, r.value),
                Format::Json => println!("{}", json!({ "equation": r.equation, "residual": rational_json(&r.value) })),
            }
        }
        return Ok(verdict(residuals.iter().all(|r| r.value == Rational::from_integer(0.into()))));
    }
    Err(Error::BadSpec("no elimination mode selected".into()))
}

pub fn search(args: &SearchArgs, format: Format) -> Result<u8> {
    let spec = SearchSpec {
        n: args.n,
        k: args.k,
        bound: args.bound,
        symmetric_only: args.symmetric,
        dedupe_affine: !args.no_dedupe,
    };
    let mut searcher = Searcher::new(spec).workers(args.workers);
    if let Some(path) = &args.resume {
        searcher = searcher.checkpoint(path);
    }
    let records = searcher.run()?;

    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    for r in &records {
        match format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({
                    "first": rationals_json(r.first.elements()),
                    "second": rationals_json(r.second.elements()),
                    "k": r.k,
                })
            )?,
            Format::Text => writeln!(out, "{} | {}", r.first, r.second)?,
        }
    }
    out.flush()?;
    eprintln!("{} collision record(s)", records.len());
    Ok(verdict(!records.is_empty()))
}
