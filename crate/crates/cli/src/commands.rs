use std::collections::BTreeMap;
use std::path::Path;

use mrd_core::algebra::{summarize, verify_t2_t3};
use mrd_core::classify::{
    apply_isometry, are_equivalent, are_isotopic, classify_codes_with, enumerate_semifields, ResumeToken,
    SearchControl,
};
use mrd_core::constructions::{dickson_nearfield, exceptional_nearfield_gl2_11, fixture, Fixture};
use mrd_core::gabidulin::{field_pair, singer_code};
use mrd_core::gf::{ExtensionBasis, FieldDescriptor};
use mrd_core::io::{self, code_json, table_json, to_json, witness_json, MatrixJson};
use mrd_core::symmetric::{find_invariant_form, knarr_subgroup, symmetric_field_code, trace_form};
use mrd_core::{Error, GabidulinSpec, Quasifield, RankCode};
use serde_json::{json, Value};

use crate::args::{Classify, ClassifyCodes, Construct, EquivArgs, IsotopyArgs, Symmetric, Verify};
use crate::error::{CliError, CliResult};
use crate::manifest::{sha256_hex, RunManifest};

/// What a command produced.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
    pub resume: Option<ResumeToken>,
}

impl Outcome {
    pub fn ok(text: String) -> Outcome {
        Outcome { text, pass: true, resume: None }
    }

    pub fn verdict(value: Value, pass: bool) -> Outcome {
        Outcome { text: to_json(&value), pass, resume: None }
    }
}

/// Inputs read and fields touched during one run, for the manifest.
#[derive(Default)]
pub struct Session {
    pub inputs: BTreeMap<String, String>,
    pub fields: Vec<FieldDescriptor>,
}

impl Session {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
        if text.trim().is_empty() {
            return Err(CliError::Usage(format!("{}: input is empty", path.display())));
        }
        Ok(text)
    }

    fn note_field(&mut self, d: FieldDescriptor) {
        if !self.fields.contains(&d) {
            self.fields.push(d);
        }
    }

    fn code(&mut self, path: &Path) -> CliResult<RankCode> {
        let text = self.read(path)?;
        let c = io::import_code(&text).map_err(|source| CliError::Input { path: path.to_path_buf(), source })?;
        self.note_field(c.field().descriptor());
        Ok(c)
    }

    fn table(&mut self, path: &Path) -> CliResult<Quasifield> {
        let text = self.read(path)?;
        io::import_table(&text).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
    }

    fn emit_code(&mut self, c: &RankCode) -> Outcome {
        self.note_field(c.field().descriptor());
        Outcome::ok(io::export_code(c))
    }
}

pub fn construct(s: &mut Session, cmd: &Construct) -> CliResult<Outcome> {
    Ok(match cmd {
        Construct::Gabidulin { q, m, n, k } => s.emit_code(&GabidulinSpec::new(*q, *m, *n, *k)?.code()?),
        Construct::Singer { q, n } => s.emit_code(&singer_code(*q, *n)?),
        Construct::Dickson { q, n } => Outcome::ok(io::export_table(&dickson_nearfield(*q, *n)?)),
        Construct::Exceptional11 { table } => {
            let x = exceptional_nearfield_gl2_11()?;
            if *table {
                Outcome::ok(io::export_table(&x.quasifield))
            } else {
                s.emit_code(&x.code)
            }
        }
        Construct::Fixture { name } => match fixture(name).map_err(|e| CliError::Usage(e.to_string()))? {
            Fixture::Code(c) => s.emit_code(&c),
            Fixture::Matrices(mats) => {
                let field = mats[0].field().descriptor();
                s.note_field(field.clone());
                let mats: Vec<MatrixJson> = mats.iter().map(MatrixJson::of).collect();
                Outcome::ok(to_json(&json!({ "field": field, "matrices": mats })))
            }
        },
    })
}

pub fn verify(s: &mut Session, cmd: &Verify) -> CliResult<Outcome> {
    Ok(match cmd {
        Verify::Mrd { code } => {
            let v = s.code(code)?.is_mrd();
            let pass = v.is_mrd;
            Outcome::verdict(serde_json::to_value(v).expect("serializable"), pass)
        }
        Verify::Quasifield { table } => {
            let report = s.table(table)?.check();
            let pass = report.ok;
            Outcome::verdict(serde_json::to_value(report).expect("serializable"), pass)
        }
        Verify::Semifield { table } => {
            let q = s.table(table)?;
            let witness = q.left_distributivity_witness();
            Outcome::verdict(json!({ "semifield": witness.is_none(), "witness": witness }), witness.is_none())
        }
        Verify::Nearfield { table } => {
            let q = s.table(table)?;
            let witness = q.associativity_witness();
            Outcome::verdict(json!({ "nearfield": witness.is_none(), "witness": witness }), witness.is_none())
        }
        Verify::Correspondence { code } => {
            let r = verify_t2_t3(&s.code(code)?)?;
            let pass = r.holds();
            Outcome::verdict(serde_json::to_value(r).expect("serializable"), pass)
        }
        Verify::Witness { source, target, witness } => {
            let (a, b) = (s.code(source)?, s.code(target)?);
            let text = s.read(witness)?;
            let w = io::import_witness(&text).map_err(|source| CliError::Input { path: witness.clone(), source })?;
            let maps = apply_isometry(&w, &a).map(|img| img == b).unwrap_or(false);
            Outcome::verdict(json!({ "maps_onto_target": maps }), maps)
        }
    })
}

pub fn invariants(s: &mut Session, input: &Path) -> CliResult<Outcome> {
    let text = s.read(input)?;
    let is_table = serde_json::from_str::<Value>(&text).ok().is_some_and(|v| v.get("table").is_some());
    if is_table {
        let q = s.table(input)?;
        let summary = serde_json::to_value(summarize(&q)).expect("serializable");
        let knarr = knarr_subgroup(&q);
        return Ok(Outcome::verdict(
            json!({ "structure": summary, "knarr_span": knarr.span.len(), "knarr_proper": knarr.proper }),
            true,
        ));
    }
    let c = s.code(input)?;
    let dist: BTreeMap<String, usize> =
        c.rank_distribution()?.counts.into_iter().map(|(r, n)| (r.to_string(), n)).collect();
    let v = c.is_mrd();
    Ok(Outcome::verdict(
        json!({
            "size": c.len(),
            "m": c.m(),
            "n": c.n(),
            "field": c.field().descriptor(),
            "linear": c.is_linear(),
            "additively_closed": c.is_additively_closed(),
            "min_distance": c.min_distance().ok(),
            "rank_distribution": dist,
            "mrd": v,
        }),
        true,
    ))
}

pub fn classify(s: &mut Session, cmd: &Classify) -> CliResult<Outcome> {
    match cmd {
        Classify::Codes(args) => classify_codes(s, args),
        Classify::Semifields { p, n } => {
            let census = enumerate_semifields(*p, *n)?;
            let classes: Vec<Value> = census
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "automorphisms": c.automorphisms,
                        "is_field": c.is_field,
                        "isotopy_class": c.isotopy_class,
                        "table": table_json(&c.quasifield),
                    })
                })
                .collect();
            Ok(Outcome::verdict(
                json!({
                    "p": p,
                    "n": n,
                    "classes": classes,
                    "proper": census.proper().count(),
                    "proper_isotopy_classes": census.proper_isotopy_classes(),
                }),
                true,
            ))
        }
        Classify::Equiv(args) => equiv(s, args),
        Classify::Isotopy(args) => isotopy(s, args),
    }
}

fn classify_codes(s: &mut Session, args: &ClassifyCodes) -> CliResult<Outcome> {
    let resume = match &args.resume {
        Some(path) => {
            s.read(path)?;
            let token = RunManifest::read(path)?.resume;
            Some(token.ok_or_else(|| CliError::Usage(format!("{}: manifest has no resume token", path.display())))?)
        }
        None => None,
    };
    let control = SearchControl { max_nodes: args.budget, resume };
    match classify_codes_with(args.q, args.n, args.d, args.mode, &control) {
        Ok(reps) => {
            if let Some(c) = reps.first() {
                s.note_field(c.field().descriptor());
            }
            let classes: Vec<_> = reps.iter().map(code_json).collect();
            Ok(Outcome::verdict(json!({ "count": reps.len(), "classes": classes }), true))
        }
        Err(Error::BudgetExceeded(partial)) => Ok(Outcome {
            text: to_json(&json!({ "complete": false, "found_so_far": partial.representatives.len() })),
            pass: false,
            resume: Some(partial.token),
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn equiv(s: &mut Session, args: &EquivArgs) -> CliResult<Outcome> {
    let (a, b) = (s.code(&args.first)?, s.code(&args.second)?);
    let value = match are_equivalent(&a, &b, args.mode)? {
        Some(w) => json!({ "equivalent": true, "mode": args.mode, "witness": witness_json(&w) }),
        None => json!({ "equivalent": false, "mode": args.mode }),
    };
    Ok(Outcome::verdict(value, true))
}

pub fn isotopy(s: &mut Session, args: &IsotopyArgs) -> CliResult<Outcome> {
    let (a, b) = (s.table(&args.first)?, s.table(&args.second)?);
    let value = match are_isotopic(&a, &b, args.kernel_order)? {
        Some(iso) => json!({ "isotopic": true, "isotopism": iso }),
        None => json!({ "isotopic": false }),
    };
    Ok(Outcome::verdict(value, true))
}

pub fn dual(s: &mut Session, input: &Path) -> CliResult<Outcome> {
    let c = s.code(input)?;
    Ok(s.emit_code(&c.dual()?))
}

pub fn symmetric(s: &mut Session, cmd: &Symmetric) -> CliResult<Outcome> {
    match cmd {
        Symmetric::FindForm { table, kernel } => {
            let q = s.table(table)?;
            let k = if *kernel { q.kernel().field } else { None };
            let found = find_invariant_form(&q, k.as_ref())?;
            let form = found.form.as_ref().map(|f| {
                serde_json::from_str::<Value>(&io::export_form(f)).expect("export produces JSON")
            });
            Ok(Outcome::verdict(
                json!({
                    "form": form,
                    "solution_dim": found.solution_dim,
                    "exhaustive": found.exhaustive,
                    "knarr_proper": knarr_subgroup(&q).proper,
                }),
                true,
            ))
        }
        Symmetric::Build { field, form } => {
            let [q, n] = field[..] else {
                return Err(CliError::Usage("--field takes q and n".into()));
            };
            if *form {
                let (k, e) = field_pair(q, n as usize)?;
                let f = trace_form(&ExtensionBasis::polynomial(&k, &e)?)?;
                s.note_field(k.descriptor());
                Ok(Outcome::ok(io::export_form(&f)))
            } else {
                Ok(s.emit_code(&symmetric_field_code(q, n as usize)?))
            }
        }
    }
}
