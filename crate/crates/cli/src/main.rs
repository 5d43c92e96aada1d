use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hyperinv::discriminant::{self, GateVerdict};
use hyperinv::localization::{
    self, FieldMode, GroupKind, InductionTrace, InvariantsReport, ProductRelation, ProductValue, StepStatus,
};
use hyperinv::poly::{pretty_symbol, Notation};
use hyperinv::presentations::{self, CatalogEntry, CatalogKey, Coefficients, GradedModule, Group, Space};

const DEFAULT_PRIMES: [u64; 4] = [2, 3, 5, 7];

#[derive(Debug, Parser)]
#[command(name = "hyperinv", version, about = "Cohomological invariants of hyperelliptic curve stacks")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Plain ASCII text: `l1` instead of `λ₁`.
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Show a stored presentation.
    Ring {
        /// GLn:N, SLn:N, mu:Q, O2, O3, SO3 or PGL2.
        #[arg(long)]
        group: Group,
        /// point, P1, Pn:N.
        #[arg(long)]
        space: Space,
        /// K (Milnor K-theory) or Hp (Galois cohomology mod p).
        #[arg(long)]
        coeff: Coefficients,
    },
    /// Class of the first discriminant stratum in P^{2i} and its divisibility.
    Disc {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        i: u32,
        /// Prime to test; repeatable. Defaults to 2, 3, 5, 7.
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// Divisibility gate for the annihilator chain in degree i.
    Gate {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        i: u32,
    },
    /// Invariants of the stack of hyperelliptic curves of genus g.
    Invariants {
        #[command(flatten)]
        target: Target,
        /// Also list the derivation.
        #[arg(long)]
        trace: bool,
    },
    /// Print a derivation and check it by replaying every step.
    Trace {
        #[arg(long, conflicts_with_all = ["n", "replay"])]
        g: Option<u32>,
        /// Derive invariants of Pⁿ ∖ Δ₁ instead of a genus.
        #[arg(long, conflicts_with = "replay")]
        n: Option<u32>,
        #[arg(long, default_value = "GL2", requires = "n")]
        group: GroupKind,
        #[arg(long, required_unless_present = "replay")]
        p: Option<u64>,
        #[arg(long, default_value = "closed")]
        mode: FieldMode,
        /// Replay a trace previously saved with `trace --json`.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Target {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value = "closed")]
    mode: FieldMode,
}

struct Out {
    notation: Notation,
}

impl Out {
    fn name(&self, s: &str) -> String {
        match self.notation {
            Notation::Unicode => pretty_symbol(s),
            Notation::Ascii => s.to_string(),
        }
    }

    /// Transliterates whatever non-ASCII glyphs remain in ASCII mode.
    fn finish(&self, text: String) -> String {
        if self.notation == Notation::Unicode {
            return text;
        }
        const TABLE: [(char, &str); 14] = [
            ('⟨', "<"),
            ('⟩', ">"),
            ('∖', "\\"),
            ('≠', "!="),
            ('→', "->"),
            ('·', "*"),
            ('⊕', "+"),
            ('∂', "d"),
            ('Δ', "D"),
            ('∈', "in"),
            ('⁰', "^0"),
            ('¹', "^1"),
            ('ⁿ', "^n"),
            ('×', "x"),
        ];
        text.chars()
            .map(|c| match TABLE.iter().find(|(u, _)| *u == c) {
                Some((_, a)) => a.to_string(),
                None => c.to_string(),
            })
            .collect()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let out = Out { notation: if cli.ascii { Notation::Ascii } else { Notation::Unicode } };
    let text = match &cli.command {
        Command::Ring { group, space, coeff } => {
            let entry = presentations::catalog_ring(CatalogKey::new(*group, *space, *coeff))?;
            if cli.json {
                json(&entry.to_json())?
            } else {
                render_ring(&out, &entry)
            }
        }
        Command::Disc { i, primes } => {
            let primes = if primes.is_empty() { DEFAULT_PRIMES.to_vec() } else { primes.clone() };
            let class = discriminant::delta1_class(*i)?;
            let mut yes = Vec::new();
            let mut no = Vec::new();
            for &p in &primes {
                if discriminant::delta1_divisible_by(*i, p)? {
                    yes.push(p);
                } else {
                    no.push(p);
                }
            }
            if cli.json {
                json(&serde_json::json!({
                    "i": i,
                    "class": class.to_ascii(),
                    "divisible": yes,
                    "not_divisible": no,
                }))?
            } else {
                let mut line = class.display(out.notation).to_string();
                if !yes.is_empty() {
                    line.push_str(&format!("; divisible: {}", join(&yes)));
                }
                if !no.is_empty() {
                    line.push_str(&format!("; not: {}", join(&no)));
                }
                line + "\n"
            }
        }
        Command::Gate { i } => {
            let verdict = discriminant::gate(*i)?;
            if cli.json {
                json(&verdict.to_json())?
            } else {
                render_gate(&out, &verdict)
            }
        }
        Command::Invariants { target, trace } => {
            let report = localization::invariants_hg(target.g, target.p, target.mode)?;
            if cli.json {
                json(&report.to_json())?
            } else {
                let mut s = render_report(&out, &report);
                if *trace {
                    s.push_str("derivation:\n");
                    s.push_str(&render_trace(&report.trace));
                }
                s
            }
        }
        Command::Trace { g, n, group, p, mode, replay } => {
            let trace = match (replay, g, n) {
                (Some(path), _, _) => {
                    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<InductionTrace>(&raw)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(g), None) => localization::invariants_hg(*g, p.unwrap_or_default(), *mode)?.trace,
                (None, None, Some(n)) => localization::invariants_projective(*group, p.unwrap_or_default(), *n)?.1,
                _ => bail!("give exactly one of --g, --n or --replay"),
            };
            let module = trace.replay()?;
            if cli.json {
                json(&trace)?
            } else {
                let mut s = render_trace(&trace);
                s.push_str(&format!("replay: ok, {} steps\n", trace.steps.len()));
                s.push_str(&format!("result: {}\n", render_degrees(&module)));
                s
            }
        }
    };
    Ok(out.finish(text))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn render_ring(out: &Out, entry: &CatalogEntry) -> String {
    let alg = &entry.algebra;
    let mut s = format!("{}\n", entry.key);
    s.push_str(&format!("characteristic: {}\nbase: {}\n", alg.characteristic(), alg.base()));
    let vars: Vec<String> = alg
        .variables()
        .iter()
        .map(|v| format!("{} ({},{})", out.name(&v.name), v.weight.codim, v.weight.degree))
        .collect();
    s.push_str(&format!("variables: {}\n", if vars.is_empty() { "none".into() } else { vars.join(", ") }));
    let rels = alg.render_relations(out.notation);
    s.push_str(&format!("relations: {}\n", if rels.is_empty() { "none".into() } else { rels.join("; ") }));
    s.push_str("generators:\n");
    for g in entry.module.generators() {
        s.push_str(&format!("  {} ({},{})", out.name(&g.name), g.bidegree.codim, g.bidegree.degree));
        if let Some(t) = g.torsion {
            s.push_str(&format!(" torsion {t}"));
        }
        s.push('\n');
    }
    if !entry.kernel.is_empty() {
        let names: Vec<String> = entry.kernel.iter().map(|k| out.name(k)).collect();
        s.push_str(&format!("kernel: {}\n", names.join(", ")));
    }
    s
}

fn render_gate(out: &Out, v: &GateVerdict) -> String {
    let n = out.notation;
    let mut s = format!("chain: {}\n", v.chain.display(n));
    s.push_str(&format!("f_{}: {}\n", v.i, v.relation.display(n)));
    if v.kills {
        s.push_str(&format!("kills: yes (remainder {})\n", v.witness.display(n)));
    } else {
        s.push_str(&format!("kills: no (quotient {})\n", v.witness.display(n)));
    }
    s
}

fn render_degrees(m: &GradedModule) -> String {
    let degrees: Vec<String> = m.degrees().iter().map(u32::to_string).collect();
    let mut s = format!("degrees {}", degrees.join(","));
    if let Some(k) = &m.undetermined {
        s.push_str(&format!(" + {}[{}]", k.name, k.degree));
    }
    s
}

fn render_report(out: &Out, r: &InvariantsReport) -> String {
    let m = &r.module;
    let mut s = format!("{} g={} p={} {} field\n", r.group, r.g, r.p, r.mode);
    if m.is_trivial() {
        s.push_str("trivial: generated by 1\n");
        return s;
    }
    s.push_str(&format!("{}\n", render_degrees(m)));
    s.push_str("generators:\n");
    for g in m.generators() {
        s.push_str(&format!("  {} degree {}", out.name(&g.name), g.bidegree.degree));
        if let Some(t) = g.torsion {
            s.push_str(&format!(" torsion {t}"));
        }
        s.push('\n');
    }
    if let Some(k) = &m.undetermined {
        s.push_str(&format!("  {} ⊂ H(k)[{}], undetermined\n", k.name, k.degree));
    }
    if !r.relations.is_empty() {
        s.push_str("relations:\n");
        for rel in &r.relations {
            s.push_str(&format!("  {}\n", render_product(out, rel)));
        }
    }
    s
}

fn render_product(out: &Out, rel: &ProductRelation) -> String {
    let (a, b) = (out.name(&rel.left), out.name(&rel.right));
    let lhs = if rel.left == rel.right { format!("{a}^2") } else { format!("{a}·{b}") };
    match &rel.value {
        ProductValue::Zero => format!("{lhs} = 0"),
        ProductValue::Unknown { candidates } => {
            let names: Vec<String> = candidates.iter().map(|c| out.name(c)).collect();
            format!("{lhs} ∈ {{{}}}", names.join(", "))
        }
    }
}

fn render_trace(trace: &InductionTrace) -> String {
    let mut s = String::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let p = &step.params;
        let mut params = vec![format!("{}", p.group), format!("p={}", p.p)];
        params.extend(p.n.map(|n| format!("n={n}")));
        params.extend(p.r.map(|r| format!("r={r}")));
        params.extend(p.g.map(|g| format!("g={g}")));
        params.extend(p.generator.as_ref().map(|x| format!("generator={x}")));
        params.extend(p.degree.map(|d| format!("degree={d}")));
        if p.p1 {
            params.push("×P1".into());
        }
        let inputs: Vec<String> =
            step.inputs.iter().map(|i| i.from.map_or_else(|| "catalog".to_string(), |f| format!("#{f}"))).collect();
        let status = match step.status {
            StepStatus::Derived => "",
            StepStatus::Reported => " (reported)",
        };
        let result = step.output.summary();
        s.push_str(&format!(
            "#{k} {} [{}] from [{}]: {}{}\n",
            step.rule,
            params.join(" "),
            inputs.join(", "),
            result,
            status
        ));
    }
    s
}
