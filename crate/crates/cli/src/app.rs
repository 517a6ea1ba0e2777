//! Command implementations. Each returns the text for stdout and an exit
//! code; `main` only parses flags and prints.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use morphic_core::graph::OccurrenceGraph;
use morphic_core::growth::classify_letters;
use morphic_core::oracle::{
    ap_evidence, factor_gaps, generate_prefix_capped, refute_from_witness, regulator_estimate,
    witness_targets, EvidenceConfig, DEFAULT_PREFIX_CAP,
};
use morphic_core::pure::{cycles_all_empty, left_tail_graph, right_tail_graph, TailGraph};
use morphic_core::route;
use morphic_core::suites::{self, SuiteReport};
use morphic_core::{Alphabet, Coding, Error, Letter, Morphism, Verdict, Word};

use crate::corpus::{self, CorpusEntry};
use crate::report::{
    errata_of, ClassificationReport, DecisionReport, ErrorReport, EvidenceReport, InputEcho,
    Normalization, RunReport, Timings,
};
use crate::spec::{parse_spec, ParseError, SpecDocument};

pub const EXIT_AP: i32 = 0;
pub const EXIT_NOT_AP: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable overriding the prefix cap.
pub const PREFIX_CAP_VAR: &str = "MORPHIC_AP_PREFIX_CAP";

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn error(message: impl Into<String>) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
            code: EXIT_ERROR,
        }
    }
}

pub fn prefix_cap() -> Result<usize, String> {
    match std::env::var(PREFIX_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{PREFIX_CAP_VAR} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_PREFIX_CAP),
    }
}

/// Reads a specification from a path, or from the bundled corpus when the
/// argument has the form `corpus:NAME`.
pub fn load(source: &str) -> Result<SpecDocument, LoadError> {
    if let Some(name) = source.strip_prefix("corpus:") {
        return corpus::find(name)
            .map(|e| e.doc)
            .ok_or_else(|| LoadError::Io(format!("no bundled corpus entry `{name}`")));
    }
    let text =
        std::fs::read_to_string(source).map_err(|e| LoadError::Io(format!("{source}: {e}")))?;
    parse_spec(&text).map_err(LoadError::Parse)
}

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Parse(ParseError),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(m) => f.write_str(m),
            LoadError::Parse(e) => e.fmt(f),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn core_error_kind(e: &Error) -> &'static str {
    match e {
        Error::Unsupported(_) => "unsupported",
        Error::ResourceLimit { .. } => "resource-limit",
        Error::NotProlongable(_) => "not-prolongable",
        Error::Erasing(_) => "erasing",
        Error::NotUniform { .. } => "not-uniform",
        Error::Precondition(_) => "precondition",
        _ => "input",
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub json: bool,
    pub verify: bool,
    pub timings: bool,
    pub n_small: Option<usize>,
    pub n_large: Option<usize>,
    pub factor_len: usize,
    pub slack: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            json: false,
            verify: false,
            timings: false,
            n_small: None,
            n_large: None,
            factor_len: 3,
            slack: 0,
        }
    }
}

impl DecideOptions {
    fn evidence_config(&self, cap: usize) -> Result<EvidenceConfig, String> {
        let n_large = self.n_large.unwrap_or(cap.min(DEFAULT_PREFIX_CAP));
        let n_small = self.n_small.unwrap_or(n_large / 10);
        if n_large > cap {
            return Err(format!(
                "prefix length {n_large} exceeds the cap {cap} (raise it with {PREFIX_CAP_VAR})"
            ));
        }
        Ok(EvidenceConfig::new(n_small, n_large, self.factor_len)
            .with_slack(self.slack)
            .with_cap(cap))
    }
}

/// Routes the document to a decider and assembles the report.
pub fn run_decide(doc: &SpecDocument, opts: &DecideOptions) -> RunReport {
    let mut report = RunReport {
        input: InputEcho::of(doc),
        normalization: None,
        decision: None,
        errata: Vec::new(),
        evidence: None,
        expected: doc.expect.map(|v| v.as_str().to_string()),
        matches_expected: None,
        error: None,
        timings_ms: None,
    };
    let fail = |report: &mut RunReport, kind: &str, message: String| {
        report.error = Some(ErrorReport {
            kind: kind.to_string(),
            message,
            line: None,
        });
    };
    let m = doc.morphism();
    let s = doc.start_letter(&m);
    let h = doc.coding(&m);

    let started = Instant::now();
    let routed = match route::decide(&m, s, h.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            fail(&mut report, core_error_kind(&e), e.to_string());
            return report;
        }
    };
    let decide_ms = started.elapsed().as_secs_f64() * 1e3;
    let tm = &routed.trimmed.morphism;
    let ta = tm.alphabet();
    report.normalization = Some(Normalization {
        steps: routed.steps.clone(),
        letters: ta.names().to_vec(),
        classification: routed
            .classification
            .as_ref()
            .map(|c| ClassificationReport::of(ta, c)),
    });
    let d = &routed.decision;
    report.errata = errata_of(d);
    let mut dr = DecisionReport::of(ta, d);
    dr.notes.retain(|n| !report.errata.contains(n));
    report.decision = Some(dr);
    report.matches_expected = doc.expect.map(|v| v == d.verdict);

    let mut verify_ms = None;
    if opts.verify {
        let started = Instant::now();
        let evidence = prefix_cap()
            .and_then(|cap| opts.evidence_config(cap))
            .and_then(|cfg| {
                verify(tm, routed.trimmed.start, routed.coding.as_ref(), d, &cfg)
                    .map_err(|e| e.to_string())
            });
        match evidence {
            Ok(e) => report.evidence = Some(e),
            Err(msg) => fail(&mut report, "evidence", msg),
        }
        verify_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    if opts.timings {
        report.timings_ms = Some(Timings {
            decide: decide_ms,
            verify: verify_ms,
        });
    }
    report
}

fn verify(
    m: &Morphism,
    s: Letter,
    h: Option<&Coding>,
    d: &morphic_core::Decision,
    cfg: &EvidenceConfig,
) -> morphic_core::Result<EvidenceReport> {
    // the decision's letters refer to the trimmed morphism; an injective
    // coding was not used by the decider and does not change the evidence
    let coded = h.filter(|h| !h.is_injective());
    let targeted = match &d.witness {
        Some(w) if coded.is_none() => !witness_targets(m, s, w)?.is_empty(),
        _ => false,
    };
    let e = match (&d.witness, targeted) {
        (Some(w), true) => refute_from_witness(m, s, None, w, cfg)?,
        _ => ap_evidence(m, s, coded, cfg)?,
    };
    let alphabet = coded.map_or(m.alphabet(), |h| h.target());
    Ok(EvidenceReport::of(alphabet, &e, targeted, d.is_ap()))
}

pub fn decide_command(source: &str, opts: &DecideOptions) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => {
            if opts.json {
                let line = match &e {
                    LoadError::Parse(p) => p.line,
                    LoadError::Io(_) => None,
                };
                let kind = match &e {
                    LoadError::Parse(_) => "parse",
                    LoadError::Io(_) => "io",
                };
                let body = serde_json::json!({
                    "error": { "kind": kind, "message": e.to_string(), "line": line }
                });
                return Output {
                    stdout: to_json(&body),
                    stderr: String::new(),
                    code: EXIT_ERROR,
                };
            }
            return Output::error(e.to_string());
        }
    };
    let report = run_decide(&doc, opts);
    let code = match (&report.error, &report.decision) {
        (None, Some(d)) if d.verdict == Verdict::AlmostPeriodic.as_str() => EXIT_AP,
        (None, Some(_)) => EXIT_NOT_AP,
        _ => EXIT_ERROR,
    };
    if opts.json {
        return Output {
            stdout: to_json(&report),
            stderr: String::new(),
            code,
        };
    }
    let text = render_report(&report);
    match &report.error {
        Some(e) => Output {
            stdout: text,
            stderr: format!("error: {}\n", e.message),
            code,
        },
        None => Output {
            stdout: text,
            stderr: String::new(),
            code,
        },
    }
}

fn list(letters: &[String]) -> String {
    if letters.is_empty() {
        "(none)".to_string()
    } else {
        letters.join(" ")
    }
}

fn render_report(r: &RunReport) -> String {
    let mut out = String::new();
    if let Some(n) = &r.input.name {
        let _ = writeln!(out, "name: {n}");
    }
    if let Some(norm) = &r.normalization {
        for s in &norm.steps {
            let _ = writeln!(out, "step: {s}");
        }
        if let Some(c) = &norm.classification {
            let _ = writeln!(out, "growing: {}", list(&c.growing));
            let _ = writeln!(out, "bounded: {}", list(&c.bounded));
        }
    }
    if let Some(d) = &r.decision {
        let _ = writeln!(out, "verdict: {}", d.verdict);
        let _ = writeln!(out, "method: {}", d.method);
        for c in &d.clauses {
            let mark = if c.holds { "holds" } else { "fails" };
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
        if let Some(w) = &d.witness {
            let _ = writeln!(
                out,
                "witness: {}",
                serde_json::to_string(w).expect("serializable")
            );
        }
        for n in &d.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    for e in &r.errata {
        let _ = writeln!(out, "erratum: {e}");
    }
    if let Some(e) = &r.evidence {
        let _ = write!(
            out,
            "evidence (finite scale, {} vs {} letters, factors up to {}): {}",
            e.n_small, e.n_large, e.max_factor_len, e.verdict
        );
        if let (Some(f), Some(a), Some(b)) = (&e.factor, e.window_small, e.window_large) {
            let _ = write!(out, " factor {} window {a} -> {b}", f.join(" "));
        }
        let _ = writeln!(
            out,
            "{}",
            if e.agrees_with_decision {
                ""
            } else {
                " (disagrees with the verdict)"
            }
        );
    }
    if let (Some(exp), Some(ok)) = (&r.expected, r.matches_expected) {
        let _ = writeln!(
            out,
            "expected: {exp} ({})",
            if ok { "matched" } else { "MISMATCH" }
        );
    }
    if let Some(t) = &r.timings_ms {
        let _ = writeln!(out, "decide: {:.3} ms", t.decide);
        if let Some(v) = t.verify {
            let _ = writeln!(out, "verify: {v:.3} ms");
        }
    }
    out
}

#[derive(Serialize)]
struct ClassifyReport {
    alphabet: Vec<String>,
    letters_in_sequence: Vec<String>,
    uniform_length: Option<usize>,
    non_erasing: bool,
    primitive: bool,
    strongly_connected_components: Vec<Vec<String>>,
    classification: Option<ClassificationReport>,
    tail_graphs: Vec<TailGraphReport>,
}

#[derive(Serialize)]
struct TailGraphReport {
    side: String,
    edges: Vec<TailEdgeReport>,
    cycles: Vec<Vec<String>>,
    cycles_empty: bool,
}

#[derive(Serialize)]
struct TailEdgeReport {
    from: String,
    to: String,
    label: Vec<String>,
}

fn tail_report(a: &Alphabet, t: &TailGraph) -> TailGraphReport {
    let name = |l: Letter| a.name(l).to_string();
    TailGraphReport {
        side: t.side.as_str().to_string(),
        edges: t
            .edges
            .iter()
            .map(|(&b, e)| TailEdgeReport {
                from: name(b),
                to: name(e.target),
                label: e.label.iter().map(|&l| name(l)).collect(),
            })
            .collect(),
        cycles: t
            .cycles()
            .iter()
            .map(|c| c.iter().map(|&l| name(l)).collect())
            .collect(),
        cycles_empty: cycles_all_empty(t).all_empty,
    }
}

pub fn classify_command(source: &str, json: bool) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    let m = doc.morphism();
    let s = doc.start_letter(&m);
    let trimmed = match m.trim_reachable_with_map(s) {
        Ok(t) => t,
        Err(e) => return Output::error(e.to_string()),
    };
    let tm = &trimmed.morphism;
    let a = tm.alphabet();
    let g = OccurrenceGraph::of(tm);
    let classification = classify_letters(tm).ok();
    let mut tails = Vec::new();
    if let Some(c) = classification.as_ref().filter(|c| !c.growing.is_empty()) {
        for t in [left_tail_graph(tm, c), right_tail_graph(tm, c)]
            .into_iter()
            .flatten()
        {
            tails.push(tail_report(a, &t));
        }
    }
    let report = ClassifyReport {
        alphabet: doc.alphabet.clone(),
        letters_in_sequence: a.names().to_vec(),
        uniform_length: tm.uniform_length(),
        non_erasing: tm.is_non_erasing(),
        primitive: morphic_core::graph::is_primitive(tm),
        strongly_connected_components: g
            .scc()
            .components
            .iter()
            .map(|c| c.iter().map(|&l| a.name(l).to_string()).collect())
            .collect(),
        classification: classification
            .as_ref()
            .map(|c| ClassificationReport::of(a, c)),
        tail_graphs: tails,
    };
    if json {
        return Output::ok(to_json(&report));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "letters in the sequence: {}",
        report.letters_in_sequence.join(" ")
    );
    let _ = writeln!(
        out,
        "uniform: {}",
        report
            .uniform_length
            .map_or("no".to_string(), |k| format!("yes, length {k}"))
    );
    let _ = writeln!(
        out,
        "non-erasing: {}",
        if report.non_erasing { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "primitive: {}",
        if report.primitive { "yes" } else { "no" }
    );
    let comps: Vec<String> = report
        .strongly_connected_components
        .iter()
        .map(|c| format!("{{{}}}", c.join(" ")))
        .collect();
    let _ = writeln!(out, "components: {}", comps.join(" "));
    if let Some(c) = &report.classification {
        let _ = writeln!(out, "growing: {}", list(&c.growing));
        let _ = writeln!(out, "bounded: {}", list(&c.bounded));
        let _ = writeln!(out, "unit images: {}", list(&c.unit));
        let _ = writeln!(out, "unit cycles: {}", list(&c.stable));
    }
    for t in &report.tail_graphs {
        let _ = writeln!(out, "{} tail graph:", t.side);
        for e in &t.edges {
            let _ = writeln!(out, "  {} -> {} \"{}\"", e.from, e.to, e.label.join(" "));
        }
    }
    Output::ok(out)
}

fn prefix_of(doc: &SpecDocument, length: usize, raw: bool) -> Result<(Word, Alphabet), String> {
    let cap = prefix_cap()?;
    let m = doc.morphism();
    let s = doc.start_letter(&m);
    let h = if raw { None } else { doc.coding(&m) };
    let w = generate_prefix_capped(&m, s, h.as_ref(), length, cap).map_err(|e| e.to_string())?;
    let alphabet = h.map_or_else(|| m.alphabet().clone(), |h| h.target().clone());
    Ok((w, alphabet))
}

pub fn generate_command(source: &str, length: usize, raw: bool) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    match prefix_of(&doc, length, raw) {
        Ok((w, a)) => Output::ok(format!("{}\n", a.render(&w))),
        Err(e) => Output::error(e),
    }
}

/// Parses a factor written as whitespace-separated letters, or as one run
/// of single-character letters.
pub fn parse_factor(a: &Alphabet, text: &str) -> Result<Word, String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err("empty factor".into());
    }
    if let [one] = tokens.as_slice() {
        if a.letter(one).is_err() {
            return a.word_from_chars(one).map_err(|e| e.to_string());
        }
    }
    tokens
        .iter()
        .map(|t| a.letter(t).map_err(|e| e.to_string()))
        .collect()
}

#[derive(Serialize)]
struct GapRow {
    factor: Vec<String>,
    prefix_length: usize,
    occurrences: usize,
    /// `null` with fewer than two occurrences.
    max_gap: Option<usize>,
    window: Option<usize>,
    first_positions: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn gaps_command(source: &str, factor: &str, lengths: &[usize], format: Format) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    let longest = lengths.iter().copied().max().unwrap_or(0);
    let (w, a) = match prefix_of(&doc, longest, false) {
        Ok(x) => x,
        Err(e) => return Output::error(e),
    };
    let u = match parse_factor(&a, factor) {
        Ok(u) => u,
        Err(e) => return Output::error(e),
    };
    let mut rows = Vec::new();
    for &n in lengths {
        let r = factor_gaps(&w[..n], &u).expect("non-empty factor");
        rows.push(GapRow {
            factor: u.iter().map(|&l| a.name(l).to_string()).collect(),
            prefix_length: n,
            occurrences: r.positions.len(),
            max_gap: r.max_gap,
            window: r.window(),
            first_positions: r.positions.iter().take(20).copied().collect(),
        });
    }
    let out = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("factor,max_gap,prefix_length\n");
            for r in &rows {
                let gap = r.max_gap.map_or("inf".to_string(), |g| g.to_string());
                let _ = writeln!(s, "{},{gap},{}", r.factor.join(" "), r.prefix_length);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let gap = r.max_gap.map_or("inf".to_string(), |g| g.to_string());
                let win = r.window.map_or("-".to_string(), |g| g.to_string());
                let _ = writeln!(
                    s,
                    "prefix {}: {} occurrences, max gap {gap}, window {win}",
                    r.prefix_length, r.occurrences
                );
            }
            s
        }
    };
    Output::ok(out)
}

pub fn regulator_command(source: &str, n_max: usize, length: usize, json: bool) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    let (w, _) = match prefix_of(&doc, length, false) {
        Ok(x) => x,
        Err(e) => return Output::error(e),
    };
    let r = regulator_estimate(&w, n_max);
    if json {
        #[derive(Serialize)]
        struct Row {
            n: usize,
            window: Option<usize>,
        }
        #[derive(Serialize)]
        struct Body {
            prefix_length: usize,
            finite_scale: bool,
            values: Vec<Row>,
        }
        return Output::ok(to_json(&Body {
            prefix_length: r.prefix_length,
            finite_scale: true,
            values: r
                .values
                .iter()
                .map(|&(n, window)| Row { n, window })
                .collect(),
        }));
    }
    let mut out = format!("prefix {} (finite-scale estimate)\n", r.prefix_length);
    for (n, v) in &r.values {
        let v = v.map_or("undefined".to_string(), |v| v.to_string());
        let _ = writeln!(out, "n = {n}: {v}");
    }
    Output::ok(out)
}

pub fn dot_command(source: &str) -> Output {
    let doc = match load(source) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    let m = doc.morphism();
    let name = doc.name.clone().unwrap_or_else(|| "occurrence".to_string());
    Output::ok(OccurrenceGraph::of(&m).to_dot(m.alphabet(), &name))
}

#[derive(Serialize)]
struct CorpusRow {
    name: String,
    file: String,
    expect: Option<String>,
}

pub fn corpus_list_command(json: bool) -> Output {
    let rows: Vec<CorpusRow> = corpus::bundled()
        .iter()
        .map(|e| CorpusRow {
            name: e.name().to_string(),
            file: e.file.clone(),
            expect: e.doc.expect.map(|v| v.as_str().to_string()),
        })
        .collect();
    if json {
        return Output::ok(to_json(&rows));
    }
    let mut out = String::new();
    for r in rows {
        let _ = writeln!(out, "{:<32} {}", r.name, r.expect.unwrap_or_default());
    }
    Output::ok(out)
}

pub fn corpus_show_command(name: &str) -> Output {
    match corpus::BUNDLED
        .iter()
        .find(|(f, _)| *f == name || f.trim_end_matches(".morph") == name)
    {
        Some((_, text)) => Output::ok(text.to_string()),
        None => Output::error(format!("no bundled corpus entry `{name}`")),
    }
}

#[derive(Clone, Debug)]
pub struct CrosscheckOptions {
    pub corpus_dir: Option<String>,
    pub seed: u64,
    pub binary_max_len: usize,
    pub uniform_count: usize,
    pub uniform_max_n: usize,
    pub uniform_max_k: usize,
    pub oracle_count: usize,
    pub oracle_small: usize,
    pub oracle_large: usize,
    pub json: bool,
}

impl Default for CrosscheckOptions {
    fn default() -> Self {
        CrosscheckOptions {
            corpus_dir: None,
            seed: 1,
            binary_max_len: 3,
            uniform_count: 200,
            uniform_max_n: 3,
            uniform_max_k: 3,
            oracle_count: 50,
            oracle_small: 10_000,
            oracle_large: 100_000,
            json: false,
        }
    }
}

#[derive(Serialize)]
struct SuiteRow {
    name: String,
    seed: Option<u64>,
    total: usize,
    agreed: usize,
    skipped: usize,
    passed: bool,
    failures: Vec<String>,
}

fn row(r: SuiteReport, seed: Option<u64>) -> SuiteRow {
    SuiteRow {
        passed: r.passed(),
        name: r.name,
        seed,
        total: r.total,
        agreed: r.agreed,
        skipped: r.skipped,
        failures: r.failures,
    }
}

/// Compares the expected verdict of every corpus entry with the routed
/// decision.
pub fn corpus_suite(entries: &[CorpusEntry]) -> SuiteReport {
    let mut r = SuiteReport {
        name: "corpus".to_string(),
        total: 0,
        agreed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for e in entries {
        let Some(expect) = e.doc.expect else {
            r.skipped += 1;
            continue;
        };
        r.total += 1;
        let report = run_decide(&e.doc, &DecideOptions::default());
        match (&report.decision, &report.error) {
            (Some(d), None) if d.verdict == expect.as_str() => r.agreed += 1,
            (Some(d), None) => r.failures.push(format!(
                "{}: expected {expect}, decided {}",
                e.name(),
                d.verdict
            )),
            (_, Some(err)) => r.failures.push(format!("{}: {}", e.name(), err.message)),
            (None, None) => unreachable!("a report has a decision or an error"),
        }
    }
    r
}

pub fn crosscheck_command(opts: &CrosscheckOptions) -> Output {
    let entries = match &opts.corpus_dir {
        Some(dir) => match corpus::load_dir(Path::new(dir)) {
            Ok(e) => e,
            Err(e) => return Output::error(e),
        },
        None => corpus::bundled(),
    };
    if opts.oracle_small >= opts.oracle_large {
        return Output::error("--oracle-small must be below --oracle-large");
    }
    let cap = match prefix_cap() {
        Ok(c) => c,
        Err(e) => return Output::error(e),
    };
    if opts.oracle_large > cap {
        return Output::error(format!(
            "prefix length {} exceeds the cap {cap} (raise it with {PREFIX_CAP_VAR})",
            opts.oracle_large
        ));
    }
    let cfg = EvidenceConfig::new(opts.oracle_small, opts.oracle_large, 3).with_cap(cap);
    let rows = vec![
        row(corpus_suite(&entries), None),
        row(suites::binary_vs_pure(opts.binary_max_len), None),
        row(
            suites::binary_erasing_vs_oracle(opts.binary_max_len, &cfg),
            None,
        ),
        row(
            suites::random_uniform_vs_pure(
                opts.seed,
                opts.uniform_count,
                opts.uniform_max_n,
                opts.uniform_max_k,
            ),
            Some(opts.seed),
        ),
        row(
            suites::decider_vs_oracle(opts.seed, opts.oracle_count, 4, 3, &cfg),
            Some(opts.seed),
        ),
    ];
    let all_passed = rows.iter().all(|r| r.passed);
    let code = if all_passed { 0 } else { 1 };
    if opts.json {
        #[derive(Serialize)]
        struct Body {
            passed: bool,
            suites: Vec<SuiteRow>,
        }
        return Output {
            stdout: to_json(&Body {
                passed: all_passed,
                suites: rows,
            }),
            stderr: String::new(),
            code,
        };
    }
    let mut out = String::new();
    for r in &rows {
        let seed = r.seed.map_or(String::new(), |s| format!(" (seed {s})"));
        let _ = writeln!(
            out,
            "{} {}{seed}: {}/{} agreed, {} skipped",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.agreed,
            r.total,
            r.skipped
        );
        for f in &r.failures {
            let _ = writeln!(out, "    {f}");
        }
    }
    Output {
        stdout: out,
        stderr: String::new(),
        code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_parsing() {
        let a = Alphabet::new(["0", "1", "x0"]).unwrap();
        assert_eq!(parse_factor(&a, "0 1").unwrap().len(), 2);
        assert_eq!(parse_factor(&a, "011").unwrap().len(), 3);
        assert_eq!(parse_factor(&a, "x0").unwrap().as_slice(), &[Letter(2)]);
        assert!(parse_factor(&a, "").is_err());
        assert!(parse_factor(&a, "2").is_err());
    }

    #[test]
    fn bundled_corpus_matches_expectations() {
        let r = corpus_suite(&corpus::bundled());
        assert!(r.passed(), "{r:?}");
    }
}
