use std::fs;
use std::path::{Path, PathBuf};

use agorum::axioms::{check_axioms, enumerate_class_rules, Axiom};
use agorum::formats;
use agorum::logic::is_consistent;
use agorum::rules::{self, kemeny, QuotaRule};
use agorum::safety::{self, AgendaProperty, Certificate, QbfInstance};
use agorum::strategy::{self, ManipulationInstance};
use agorum::{parse_formula, Agenda, Budget, Error as CoreError, Formula, Profile, Rule};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::report::{self, ErrorBody, ErrorReport, Inputs, Report};
use crate::{Cli, Command, Reduce, RuleArgs, RuleSpec, TieBreak};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    InFile { path: String, source: CoreError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

fn root(e: &CoreError) -> &CoreError {
    match e {
        CoreError::AtLine { source, .. } => root(source),
        e => e,
    }
}

impl CliError {
    fn core(&self) -> Option<&CoreError> {
        match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => Some(e),
            _ => None,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            _ => self.core().map_or("usage", CoreError::code),
        }
    }

    pub fn exit_status(&self) -> u8 {
        if self.code() == "budget_exceeded" {
            3
        } else {
            2
        }
    }

    fn witness(&self) -> Option<Value> {
        match root(self.core()?) {
            CoreError::IrrationalAgent { agent, reason, core } => {
                Some(json!({ "agent": agent, "reason": reason, "mi_subset": report::formulas(core) }))
            }
            CoreError::NotIndependent(v) => Some(report::violation(v)),
            _ => None,
        }
    }

    pub fn report(&self, command: &str) -> ErrorReport {
        ErrorReport {
            command: command.to_string(),
            error: ErrorBody { code: self.code().to_string(), message: self.to_string(), witness: self.witness() },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn name(cmd: &Command) -> String {
    match cmd {
        Command::Aggregate { .. } => "aggregate".into(),
        Command::Windet { .. } => "windet".into(),
        Command::Manipulate { .. } => "manipulate".into(),
        Command::StrategyProof { .. } => "strategy-proof".into(),
        Command::Axioms { .. } => "axioms".into(),
        Command::Safety { .. } => "safety".into(),
        Command::Props { .. } => "props".into(),
        Command::Enumerate { .. } => "enumerate".into(),
        Command::Reduce { kind } => format!(
            "reduce {}",
            match kind {
                Reduce::Kemeny { .. } => "kemeny",
                Reduce::SatManip { .. } => "sat-manip",
                Reduce::QbfLift { .. } => "qbf-lift",
                Reduce::QbfSsmp { .. } => "qbf-ssmp",
                Reduce::SsmpMp { .. } => "ssmp-mp",
            }
        ),
    }
}

struct Ctx {
    inputs: Inputs,
    budget: Budget,
    witnesses: Vec<Value>,
}

impl Ctx {
    fn read(&mut self, label: &str, path: &Path) -> Result<String> {
        let shown = path.display().to_string();
        let bytes = fs::read(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        self.inputs.file(label, bytes.clone());
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{shown}: not valid UTF-8")))
    }

    fn parsed<T>(&mut self, label: &str, path: &Path, parse: impl FnOnce(&str) -> agorum::Result<T>) -> Result<T> {
        let text = self.read(label, path)?;
        parse(&text).map_err(|source| CliError::InFile { path: path.display().to_string(), source })
    }

    fn agenda(&mut self, path: &Path) -> Result<Agenda> {
        self.parsed("agenda", path, formats::parse_agenda)
    }

    fn profile(&mut self, path: &Path, agenda: &Agenda) -> Result<Profile> {
        self.parsed("profile", path, |t| formats::parse_profile(t, agenda))
    }

    fn rule(&mut self, args: &RuleArgs, agenda: &Agenda, n: usize) -> Result<Rule> {
        self.inputs.option("rule", &args.rule);
        self.inputs.option("tie_break", format!("{:?}", args.tie_break).to_lowercase());
        if args.quotas.is_some() && args.rule != RuleSpec::QuotaFile {
            return Err(CliError::Usage("--quotas only applies to --rule quota-file".into()));
        }
        Ok(match args.rule {
            RuleSpec::Majority => Rule::majority(n)?,
            RuleSpec::Quota(m) => Rule::uniform_quota(n, m)?,
            RuleSpec::QuotaFile => {
                let path = args.quotas.as_ref().ok_or_else(|| CliError::Usage("--rule quota-file needs --quotas".into()))?;
                let qs = self.parsed("quotas", path, formats::parse_quotas)?;
                if qs.len() != agenda.len() {
                    return Err(CoreError::WidthMismatch { expected: agenda.len(), found: qs.len() }.into());
                }
                Rule::Quota(QuotaRule::per_formula(n, qs)?)
            }
            RuleSpec::Pbp => Rule::PremiseBased,
            RuleSpec::Dbp => Rule::DistanceBased { lex_tie_break: args.tie_break == TieBreak::Lex },
        })
    }

    fn agents(&mut self, n: usize) -> usize {
        self.inputs.option("agents", n);
        n
    }
}

/// The file is written under `out_dir` when given and inlined otherwise.
fn emit(out_dir: Option<&PathBuf>, file: &str, content: String) -> Result<Value> {
    match out_dir {
        Some(dir) => {
            let path = dir.join(file);
            fs::create_dir_all(dir)
                .and_then(|_| fs::write(&path, &content))
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Ok(json!({ "file": file, "sha256": hex::encode(Sha256::digest(content.as_bytes())) }))
        }
        None => Ok(json!({ "file": file, "content": content })),
    }
}

fn parse_cli_formula(text: &str) -> Result<Formula> {
    parse_formula(text).map_err(|e| CliError::Core(e.into()))
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let mut budget = Budget::default();
    if let Some(b) = cli.budget {
        budget.max_profiles = b;
    }
    let mut ctx = Ctx { inputs: Inputs::default(), budget, witnesses: Vec::new() };
    if let Some(b) = cli.budget {
        ctx.inputs.option("budget", b);
    }
    let command = name(&cli.command);
    let result = match &cli.command {
        Command::Aggregate { agenda, profile, rule } => aggregate(&mut ctx, agenda, profile, rule)?,
        Command::Windet { agenda, profile, rule, formula } => windet(&mut ctx, agenda, profile, rule, formula)?,
        Command::Manipulate { agenda, profile, rule, agent } => manipulate(&mut ctx, agenda, profile, rule, *agent)?,
        Command::StrategyProof { agenda, rule, agents } => strategy_proof(&mut ctx, agenda, rule, *agents)?,
        Command::Axioms { agenda, rule, agents, axioms } => check(&mut ctx, agenda, rule, *agents, axioms)?,
        Command::Safety { agenda, class, agents, brute_force } => {
            safety_cmd(&mut ctx, agenda, *class, *agents, *brute_force)?
        }
        Command::Props { agenda, props } => props_cmd(&mut ctx, agenda, props)?,
        Command::Enumerate { agenda, class, agents } => enumerate(&mut ctx, agenda, *class, *agents)?,
        Command::Reduce { kind } => match kind {
            Reduce::Kemeny { preferences, out_dir } => reduce_kemeny(&mut ctx, preferences, out_dir.as_ref())?,
            Reduce::SatManip { formula, out_dir } => reduce_sat_manip(&mut ctx, formula, out_dir.as_ref())?,
            Reduce::QbfLift { qbf, out_dir } => reduce_qbf_lift(&mut ctx, qbf, out_dir.as_ref())?,
            Reduce::QbfSsmp { qbf, out_dir } => reduce_qbf_ssmp(&mut ctx, qbf, out_dir.as_ref())?,
            Reduce::SsmpMp { agenda, out_dir } => reduce_ssmp_mp(&mut ctx, agenda, out_dir.as_ref())?,
        },
    };
    let inputs_digest = ctx.inputs.digest(&command);
    let options = ctx.inputs.options.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect();
    Ok(Report { command, options, inputs_digest, result, witnesses: ctx.witnesses })
}

fn aggregate(ctx: &mut Ctx, agenda: &Path, profile: &Path, args: &RuleArgs) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let profile = ctx.profile(profile, &agenda)?;
    let rule = ctx.rule(args, &agenda, profile.n())?;
    let outcomes = rule.outcomes(&agenda, &profile)?;
    for o in &outcomes {
        if !agenda.is_consistent(o) {
            ctx.witnesses.push(json!({
                "kind": "inconsistent_outcome",
                "outcome": o.symbols(),
                "mi_subset": report::formulas(&agenda.core_of(o)),
            }));
        }
    }
    let mut result = json!({
        "rule": rule.to_string(),
        "agents": profile.n(),
        "outcomes": outcomes.iter().map(|o| report::judgment_set(&agenda, o)).collect::<Vec<_>>(),
        "consistent": outcomes.iter().all(|o| agenda.is_consistent(o)),
    });
    if matches!(rule, Rule::DistanceBased { .. }) {
        result["min_distance"] = rules::apply_dbp(&agenda, &profile)?.min_distance.into();
    }
    Ok(result)
}

fn windet(ctx: &mut Ctx, agenda: &Path, profile: &Path, args: &RuleArgs, formula: &str) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let profile = ctx.profile(profile, &agenda)?;
    let rule = ctx.rule(args, &agenda, profile.n())?;
    ctx.inputs.option("formula", formula);
    let phi = parse_cli_formula(formula)?;
    let (mode, answer) = if rule.is_resolute() {
        ("outcome", rules::windet(&rule, &agenda, &profile, &phi)?)
    } else {
        let l = agenda.judgment_set(std::slice::from_ref(&phi))?;
        ("some_winner", rules::windet_star(&agenda, &profile, &l)?)
    };
    Ok(json!({ "rule": rule.to_string(), "formula": phi.to_string(), "mode": mode, "accepted": answer }))
}

fn manipulate(ctx: &mut Ctx, agenda: &Path, profile: &Path, args: &RuleArgs, agent: usize) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let profile = ctx.profile(profile, &agenda)?;
    let rule = ctx.rule(args, &agenda, profile.n())?;
    ctx.inputs.option("agent", agent);
    if agent == 0 {
        return Err(CoreError::AgentOutOfRange { agent, n: profile.n() }.into());
    }
    let inst = ManipulationInstance::new(agenda.clone(), profile.clone(), agent - 1)?;
    let truthful = rule.apply(&agenda, &profile)?;
    let found = strategy::find_manipulation(&rule, &inst)?;
    if let Some(w) = &found {
        let outcome = rule.apply(&agenda, &profile.with_agent(agent - 1, w.insincere.clone()))?;
        ctx.witnesses.push(json!({
            "kind": "manipulation",
            "insincere": report::judgment_set(&agenda, &w.insincere),
            "outcome": report::judgment_set(&agenda, &outcome),
            "truthful_distance": w.truthful_distance,
            "manipulated_distance": w.manipulated_distance,
        }));
    }
    Ok(json!({
        "rule": rule.to_string(),
        "agent": agent,
        "truthful_judgment": report::judgment_set(&agenda, profile.agent(agent - 1)),
        "truthful_outcome": report::judgment_set(&agenda, &truthful),
        "manipulable": found.is_some(),
    }))
}

fn strategy_proof(ctx: &mut Ctx, agenda: &Path, args: &RuleArgs, n: usize) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let n = ctx.agents(n);
    let rule = ctx.rule(args, &agenda, n)?;
    let found = strategy::is_strategy_proof(&rule, &agenda, n, &ctx.budget)?;
    if let Some(w) = &found {
        ctx.witnesses.push(json!({
            "kind": "manipulation",
            "profile": report::profile(&w.profile),
            "agent": w.agent + 1,
            "insincere": report::judgment_set(&agenda, &w.witness.insincere),
            "truthful_distance": w.witness.truthful_distance,
            "manipulated_distance": w.witness.manipulated_distance,
        }));
    }
    Ok(json!({ "rule": rule.to_string(), "agents": n, "strategy_proof": found.is_none() }))
}

fn check(ctx: &mut Ctx, agenda: &Path, args: &RuleArgs, n: usize, axioms: &[Axiom]) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let n = ctx.agents(n);
    let rule = ctx.rule(args, &agenda, n)?;
    let axioms = if axioms.is_empty() { Axiom::ALL.to_vec() } else { axioms.to_vec() };
    ctx.inputs.option("axioms", axioms.iter().map(|a| a.name()).collect::<Vec<_>>().join(","));
    let checks = check_axioms(&rule, &agenda, n, &axioms, &ctx.budget)?;
    let mut rows = Vec::new();
    for (axiom, v) in &checks {
        rows.push(json!({ "axiom": axiom.name(), "holds": v.is_none() }));
        if let Some(v) = v {
            ctx.witnesses.push(report::violation(v));
        }
    }
    Ok(json!({ "rule": rule.to_string(), "agents": n, "axioms": rows }))
}

fn safety_cmd(ctx: &mut Ctx, agenda: &Path, class: agorum::axioms::AxiomClass, n: usize, brute: bool) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    ctx.inputs.option("class", class);
    let n = ctx.agents(n);
    let v = safety::safety_verdict(&agenda, class, n, &ctx.budget)?;
    let certificate = match &v.certificate {
        Certificate::PropertyHolds(p) => json!({ "kind": "property_holds", "property": p.name() }),
        Certificate::QuotaTooHigh { subset, min_quota } => {
            json!({ "kind": "quota_too_high", "mi_subset": report::mi_subset(subset), "min_quota": min_quota })
        }
        Certificate::Unsafe(w) => {
            ctx.witnesses.push(json!({
                "kind": "unsafe_profile",
                "rule": w.rule.to_string(),
                "profile": report::profile(&w.profile),
                "outcome": report::judgment_set(&agenda, &w.outcome),
                "subset": report::formulas(&w.subset),
            }));
            json!({ "kind": "unsafe" })
        }
    };
    let mut result = json!({
        "class": class.to_string(),
        "agents": n,
        "safe": v.safe,
        "property": {
            "name": v.property.property.name(),
            "holds": v.property.holds,
            "mi_subset": v.property.witness.as_ref().map(report::mi_subset),
        },
        "certificate": certificate,
    });
    if brute {
        let found = safety::brute_force_unsafety(&agenda, class, n, &ctx.budget)?;
        if let Some(w) = &found {
            ctx.witnesses.push(json!({
                "kind": "brute_force_profile",
                "profile": report::profile(&w.profile),
                "outcome": report::judgment_set(&agenda, &w.outcome),
            }));
        }
        result["brute_force"] = json!({ "safe": found.is_none(), "agrees": found.is_none() == v.safe });
    }
    Ok(result)
}

fn props_cmd(ctx: &mut Ctx, agenda: &Path, props: &[AgendaProperty]) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let props =
        if props.is_empty() { vec![AgendaProperty::MP, AgendaProperty::SMP, AgendaProperty::SSMP] } else { props.to_vec() };
    ctx.inputs.option("props", props.iter().map(|p| p.name()).collect::<Vec<_>>().join(","));
    let mis = safety::minimal_inconsistent_subsets(&agenda, None, &ctx.budget)?;
    let mut rows = Vec::new();
    for &p in &props {
        let c = safety::satisfies_property(&agenda, p, &ctx.budget)?;
        if let Some(d) = &c.witness {
            ctx.witnesses.push(json!({ "kind": "offending_mi_subset", "property": p.name(), "mi_subset": report::mi_subset(d) }));
        }
        rows.push(json!({ "property": p.name(), "holds": c.holds }));
    }
    Ok(json!({ "mi_subsets": mis.iter().map(report::mi_subset).collect::<Vec<_>>(), "properties": rows }))
}

fn enumerate(ctx: &mut Ctx, agenda: &Path, class: Option<agorum::axioms::AxiomClass>, n: usize) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let Some(class) = class else {
        let sets: Vec<Value> = agenda.judgment_sets().iter().map(|j| report::judgment_set(&agenda, j)).collect();
        return Ok(json!({ "count": sets.len(), "judgment_sets": sets }));
    };
    ctx.inputs.option("class", class);
    let n = ctx.agents(n);
    let rules = enumerate_class_rules(class, &agenda, n, &ctx.budget)?;
    Ok(json!({
        "class": class.to_string(),
        "agents": n,
        "count": rules.len(),
        "rules": rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    }))
}

fn reduce_kemeny(ctx: &mut Ctx, preferences: &Path, out: Option<&PathBuf>) -> Result<Value> {
    let pp = ctx.parsed("preferences", preferences, formats::parse_preferences)?;
    let agenda = kemeny::build_kemeny_agenda(pp.candidates())?;
    let profile = kemeny::encode_preference_profile(&agenda, &pp)?;
    let scores = kemeny::kemeny_scores(&pp);
    let best = scores.iter().copied().min().unwrap_or(0);
    let mut via_dbp = Vec::new();
    let mut via_orders = Vec::new();
    for (i, c) in pp.candidates().iter().enumerate() {
        if kemeny::kemeny_winner_on(&agenda, &pp, i)? {
            via_dbp.push(c.clone());
        }
        if scores[i] == best {
            via_orders.push(c.clone());
        }
    }
    let files = vec![
        emit(out, "agenda.txt", formats::write_agenda(&agenda))?,
        emit(out, "profile.txt", formats::write_profile(&profile))?,
    ];
    let score_map: serde_json::Map<String, Value> =
        pp.candidates().iter().zip(&scores).map(|(c, &s)| (c.clone(), s.into())).collect();
    Ok(json!({
        "candidates": pp.candidates(),
        "voters": pp.n(),
        "agenda_size": agenda.len(),
        "kemeny_scores": score_map,
        "winners_via_dbp": via_dbp,
        "winners_via_orders": via_orders,
        "agree": via_dbp == via_orders,
        "files": files,
    }))
}

fn reduce_sat_manip(ctx: &mut Ctx, formula: &str, out: Option<&PathBuf>) -> Result<Value> {
    ctx.inputs.option("formula", formula);
    let phi = parse_cli_formula(formula)?;
    let inst = strategy::build_manip_reduction(&phi)?;
    let found = strategy::find_manipulation(&Rule::PremiseBased, &inst)?;
    let truthful = Rule::PremiseBased.apply(&inst.agenda, &inst.profile)?;
    let truthful_distance = agorum::agenda::characteristic_distance(inst.profile.agent(inst.agent), &truthful)?;
    if let Some(w) = &found {
        ctx.witnesses.push(json!({
            "kind": "manipulation",
            "insincere": report::judgment_set(&inst.agenda, &w.insincere),
            "manipulated_distance": w.manipulated_distance,
            "certificate_verified": strategy::verify_manipulation_certificate(&inst, &w.insincere),
        }));
    }
    let files = vec![
        emit(out, "agenda.txt", formats::write_agenda(&inst.agenda))?,
        emit(out, "profile.txt", formats::write_profile(&inst.profile))?,
    ];
    Ok(json!({
        "formula": phi.to_string(),
        "satisfiable": is_consistent(std::slice::from_ref(&phi)),
        "agenda_size": inst.agenda.len(),
        "agent": inst.agent + 1,
        "truthful_distance": truthful_distance,
        "manipulable": found.is_some(),
        "files": files,
    }))
}

fn reduce_qbf_lift(ctx: &mut Ctx, qbf: &Path, out: Option<&PathBuf>) -> Result<Value> {
    let q = ctx.parsed("qbf", qbf, formats::parse_qbf)?;
    let (pos, neg) = safety::lift_to_sat2(&q)?;
    let b = ctx.budget;
    let files = vec![emit(out, "lifted.qbf", formats::write_qbf(&pos))?, emit(out, "negated.qbf", formats::write_qbf(&neg))?];
    Ok(json!({
        "qbf": q.to_string(),
        "true": safety::eval_qbf(&q, &b)?,
        "lifted": pos.to_string(),
        "lifted_true": safety::eval_qbf(&pos, &b)?,
        "negated": neg.to_string(),
        "negated_true": safety::eval_qbf(&neg, &b)?,
        "files": files,
    }))
}

fn reduce_qbf_ssmp(ctx: &mut Ctx, qbf: &Path, out: Option<&PathBuf>) -> Result<Value> {
    let q = ctx.parsed("qbf", qbf, formats::parse_qbf)?;
    let agenda = safety::ssmp_agenda_from_qbf(&q)?;
    let negated = QbfInstance::new(q.universals.clone(), q.existentials.clone(), Formula::not(q.matrix.clone()))?;
    let both = safety::eval_qbf(&q, &ctx.budget)? && safety::eval_qbf(&negated, &ctx.budget)?;
    let check = safety::satisfies_property(&agenda, AgendaProperty::SSMP, &ctx.budget)?;
    if let Some(d) = &check.witness {
        ctx.witnesses.push(json!({ "kind": "offending_mi_subset", "property": "SSMP", "mi_subset": report::mi_subset(d) }));
    }
    let files = vec![emit(out, "agenda.txt", formats::write_agenda(&agenda))?];
    Ok(json!({
        "qbf": q.to_string(),
        "formula_and_negation_true": both,
        "ssmp": check.holds,
        "agrees": check.holds == both,
        "files": files,
    }))
}

fn reduce_ssmp_mp(ctx: &mut Ctx, agenda: &Path, out: Option<&PathBuf>) -> Result<Value> {
    let agenda = ctx.agenda(agenda)?;
    let psi = safety::mp_agenda_from_ssmp(&agenda)?;
    let ssmp = safety::satisfies_property(&agenda, AgendaProperty::SSMP, &ctx.budget)?;
    let mp = safety::satisfies_property(&psi, AgendaProperty::MP, &ctx.budget)?;
    for (name, c) in [("SSMP", &ssmp), ("MP", &mp)] {
        if let Some(d) = &c.witness {
            ctx.witnesses.push(json!({ "kind": "offending_mi_subset", "property": name, "mi_subset": report::mi_subset(d) }));
        }
    }
    let files = vec![emit(out, "agenda.txt", formats::write_agenda(&psi))?];
    Ok(json!({
        "agenda_size": agenda.len(),
        "copied_size": psi.len(),
        "ssmp": ssmp.holds,
        "mp": mp.holds,
        "agrees": ssmp.holds == mp.holds,
        "files": files,
    }))
}

