mod render;
mod source;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cgd::codec::{encode_graph, encode_rule, enumerate_disks, GraphFile};
use cgd::rule::{apply_localizable, validate_local_rule, ValidationMode};
use cgd::universal::{
    build_machine_world, check_intrinsic_simulation, label_with, simulate_via_machine, MachineGraph, MachinePhase,
    RuleRef,
};
use clap::{Parser, Subcommand};

use render::{render, Format};
use source::{load_description, load_graph, load_rule};

#[derive(Parser)]
#[command(name = "cgd", version, about = "Causal graph dynamics on port graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Budgets {
    /// Most machine steps before giving up.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_machine: u64,
    /// Most disks enumerated when tabulating or validating a rule.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_enum: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the code of a graph.
    Encode {
        /// Fixture name, random:<ports>:<labels>:<max>, or code file.
        #[arg(long)]
        graph: String,
        /// Print a full code file with its header line.
        #[arg(long)]
        with_header: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Read a code file and print the graph.
    Decode {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
    },
    /// Iterate a rule and print every step.
    Run {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check the consistency conditions of a rule.
    ValidateRule {
        #[arg(long)]
        rule: String,
        /// Sizes rules that adapt to their input, such as identity.
        #[arg(long)]
        graph: Option<String>,
        /// Random graphs per condition where enumeration is over budget.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check that the universal rule follows a rule step for step.
    Simulate {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Description carried in the labels; defaults to the rule's own.
        #[arg(long)]
        description: Option<String>,
        /// Build the labelled start graph with the construction machine.
        #[arg(long)]
        via_machine: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Run the construction machine on the code of a graph.
    MachineRun {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
        /// Print one line per machine step.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Print every disk of a radius in code order.
    EnumerateDisks {
        #[arg(long)]
        ports: u8,
        #[arg(long)]
        labels: u16,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Format::Code)]
        format: Format,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Print the table description of a rule.
    DescribeRule {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: Option<String>,
        #[command(flatten)]
        budgets: Budgets,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one command; `Ok(false)` is a negative verdict.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Encode {
            graph,
            with_header,
            seed,
        } => {
            let g = load_graph(&graph, seed)?;
            if with_header {
                print!("{}", GraphFile::from_graph(&g.graph, g.labels));
            } else {
                println!("{}", encode_graph(&g.graph));
            }
            Ok(true)
        }
        Command::Decode { graph, format } => {
            let g = load_graph(&graph, 0)?;
            println!("{}", render(&g.graph, format, 0, &graph));
            Ok(true)
        }
        Command::Run {
            rule,
            graph,
            steps,
            format,
            seed,
            budgets,
        } => {
            let g = load_graph(&graph, seed)?;
            let f = load_rule(&rule, Some(&g), budgets.budget_enum as usize)?.rule;
            let mut x = g.graph;
            for step in 0..=steps {
                if step > 0 {
                    x = apply_localizable(&f, &x).with_context(|| format!("step {step}"))?;
                }
                println!("{}", render(&x, format, step, &format!("step {step}")));
                if format != Format::Summary {
                    eprintln!("{}", cgd::export::summary_line(step, &x));
                }
            }
            Ok(true)
        }
        Command::ValidateRule {
            rule,
            graph,
            samples,
            seed,
            budgets,
        } => {
            let g = graph.map(|s| load_graph(&s, seed)).transpose()?;
            let f = load_rule(&rule, g.as_ref(), budgets.budget_enum as usize)?.rule;
            let mode = ValidationMode::Auto {
                budget: budgets.budget_enum as usize,
                samples,
                seed,
            };
            let report = validate_local_rule(&f, mode)?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Simulate {
            rule,
            graph,
            steps,
            description,
            via_machine,
            seed,
            budgets,
        } => {
            let budget = budgets.budget_enum as usize;
            let g = load_graph(&graph, seed)?;
            let input = load_rule(&rule, Some(&g), budget)?;
            let d = match (description, input.description) {
                (Some(path), _) => load_description(&path)?,
                (None, Some(own)) => own,
                (None, None) => encode_rule(&input.rule, budget)?,
            };
            let d = RuleRef::new(d);
            println!("rule {} description {}", input.rule.name(), d.short());
            let verdict = if via_machine {
                let (run, verdict) = simulate_via_machine(
                    &input.rule,
                    &g.graph,
                    steps,
                    &d,
                    budget,
                    budgets.budget_machine as usize,
                )?;
                println!("machine steps={} built={}", run.steps, run.graph.vertex_count());
                verdict
            } else {
                check_intrinsic_simulation(&input.rule, &g.graph, steps, &d, budget)?
            };
            println!("{verdict}");
            Ok(verdict.passed())
        }
        Command::MachineRun {
            rule,
            graph,
            format,
            trace,
            seed,
            budgets,
        } => {
            let budget = budgets.budget_enum as usize;
            let g = load_graph(&graph, seed)?;
            let input = load_rule(&rule, Some(&g), budget)?;
            let d = RuleRef::new(match input.description {
                Some(d) => d,
                None => encode_rule(&input.rule, budget)?,
            });
            let mut w: MachineGraph = build_machine_world(&g.graph, &d)?;
            let limit = budgets.budget_machine as usize;
            while w.phase() != MachinePhase::Halted {
                if w.steps() >= limit {
                    bail!("machine did not halt within {limit} steps");
                }
                let record = w.step()?;
                if trace {
                    println!("{record}");
                }
            }
            let built = w.built_graph()?;
            let expected = label_with(&g.graph, &d)?;
            println!("{}", render(&built, format, w.steps(), "built"));
            println!("machine steps={} matches_input={}", w.steps(), built == expected);
            Ok(built == expected)
        }
        Command::EnumerateDisks {
            ports,
            labels,
            radius,
            format,
            budgets,
        } => {
            if ports == 0 || labels == 0 {
                bail!("ports and labels must be positive");
            }
            let disks = enumerate_disks(ports, labels, radius, budgets.budget_enum as usize)?;
            for (i, d) in disks.iter().enumerate() {
                println!("{}", render(d.graph(), format, i, &format!("disk {i}")));
            }
            eprintln!("{} disks", disks.len());
            Ok(true)
        }
        Command::DescribeRule { rule, graph, budgets } => {
            let budget = budgets.budget_enum as usize;
            let g = graph.map(|s| load_graph(&s, 0)).transpose()?;
            let input = load_rule(&rule, g.as_ref(), budget)?;
            let d = match input.description {
                Some(d) => d,
                None => encode_rule(&input.rule, budget)?,
            };
            print!("{d}");
            Ok(true)
        }
    }
}
