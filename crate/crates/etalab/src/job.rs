//! Job-file parsing: a line-oriented block format declaring the ring, the
//! named modules, the task, and bounds. See docs/job-format.md for the
//! grammar.

use crate::field::{FieldSpec, Rationals, DEFAULT_PRIME};
use crate::poly::{parse_polynomial, Homogeneity, Polynomial};
use std::fmt;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Check,
    Hilbert,
    Tor,
    Eta,
    GenFun,
    Rigidity,
    Report,
}

impl Task {
    pub fn parse(s: &str) -> Option<Task> {
        Some(match s {
            "check" => Task::Check,
            "hilbert" => Task::Hilbert,
            "tor" => Task::Tor,
            "eta" => Task::Eta,
            "genfun" => Task::GenFun,
            "rigidity" => Task::Rigidity,
            "report" => Task::Report,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Check => "check",
            Task::Hilbert => "hilbert",
            Task::Tor => "tor",
            Task::Eta => "eta",
            Task::GenFun => "genfun",
            Task::Rigidity => "rigidity",
            Task::Report => "report",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            "text" => OutputFormat::Text,
            _ => return None,
        })
    }
}

/// One module block: generator twists plus relation columns (each column
/// is a vector of polynomial sources over the generators).
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub name: String,
    pub gens: Vec<usize>,
    pub rel_columns: Vec<Vec<String>>,
    /// Source line of each relation column, for diagnostics.
    pub rel_lines: Vec<usize>,
}

/// A fully validated job. Polynomials stay as source text here; the
/// pipeline re-parses them over the chosen backend field.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub task: Task,
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ring_relations: Vec<String>,
    /// Source line of each ring relation, for diagnostics.
    pub ring_relation_lines: Vec<usize>,
    pub modules: Vec<ModuleSpec>,
    pub pair: Option<(String, String)>,
    pub j_bound: Option<usize>,
    pub d_bound: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl JobSpec {
    pub fn module(&self, name: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.name == name)
    }

    /// The module pair pairwise tasks act on: the declared `pair`, else
    /// the first two modules, else the single module against itself.
    pub fn effective_pair(&self) -> Option<(String, String)> {
        if let Some(p) = &self.pair {
            return Some(p.clone());
        }
        match self.modules.len() {
            0 => None,
            1 => Some((self.modules[0].name.clone(), self.modules[0].name.clone())),
            _ => Some((self.modules[0].name.clone(), self.modules[1].name.clone())),
        }
    }
}

/// Parse diagnostic with one-based line and column.
#[derive(Clone, Debug)]
pub struct JobError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for JobError {}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, JobError> {
    Err(JobError {
        line,
        col,
        message: message.into(),
    })
}

fn split_csv(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).collect()
}

/// Parse and validate a job file.
pub fn parse_job(text: &str) -> Result<JobSpec, JobError> {
    let mut task = None;
    let mut field = FieldSpec::Rationals;
    let mut vars: Vec<String> = Vec::new();
    let mut ring_relations: Vec<String> = Vec::new();
    let mut ring_relation_lines: Vec<usize> = Vec::new();
    let mut modules: Vec<ModuleSpec> = Vec::new();
    let mut pair = None;
    let mut j_bound = None;
    let mut d_bound = None;
    let mut out = None;
    let mut format = OutputFormat::Json;
    let mut saw_ring = false;

    #[derive(PartialEq)]
    enum Block {
        Top,
        Ring,
        Module(usize),
    }
    let mut block = Block::Top;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match block {
            Block::Top => match key {
                "task" => {
                    task = Some(Task::parse(rest).ok_or(JobError {
                        line: lineno,
                        col: 1,
                        message: format!("unknown task '{rest}'"),
                    })?);
                }
                "pair" => {
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    if names.len() != 2 {
                        return err(lineno, 1, "pair needs exactly two module names");
                    }
                    pair = Some((names[0].to_string(), names[1].to_string()));
                }
                "bounds" => {
                    for part in rest.split_whitespace() {
                        let Some((k, v)) = part.split_once('=') else {
                            return err(lineno, 1, format!("bad bound '{part}', expected J=n or D=n"));
                        };
                        let n: usize = v.parse().map_err(|_| JobError {
                            line: lineno,
                            col: 1,
                            message: format!("bad bound value '{v}'"),
                        })?;
                        match k {
                            "J" => j_bound = Some(n),
                            "D" => d_bound = Some(n),
                            _ => return err(lineno, 1, format!("unknown bound '{k}'")),
                        }
                    }
                }
                "output" => out = Some(PathBuf::from(rest)),
                "format" => {
                    format = OutputFormat::parse(rest).ok_or(JobError {
                        line: lineno,
                        col: 1,
                        message: format!("unknown format '{rest}'"),
                    })?;
                }
                "ring" => {
                    if rest != "{" {
                        return err(lineno, 1, "expected 'ring {'");
                    }
                    if saw_ring {
                        return err(lineno, 1, "duplicate ring block");
                    }
                    saw_ring = true;
                    block = Block::Ring;
                }
                "module" => {
                    let Some(name) = rest.strip_suffix('{').map(str::trim) else {
                        return err(lineno, 1, "expected 'module <name> {'");
                    };
                    if name.is_empty() {
                        return err(lineno, 1, "module needs a name");
                    }
                    if modules.iter().any(|m| m.name == name) {
                        return err(lineno, 1, format!("duplicate module '{name}'"));
                    }
                    modules.push(ModuleSpec {
                        name: name.to_string(),
                        gens: Vec::new(),
                        rel_columns: Vec::new(),
                        rel_lines: Vec::new(),
                    });
                    block = Block::Module(modules.len() - 1);
                }
                _ => return err(lineno, 1, format!("unknown directive '{key}'")),
            },
            Block::Ring => match key {
                "}" => block = Block::Top,
                "field" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    field = match parts.as_slice() {
                        ["Q"] => FieldSpec::Rationals,
                        ["Fp"] => FieldSpec::PrimeField(DEFAULT_PRIME),
                        ["Fp", p] => {
                            let p: u64 = p.parse().map_err(|_| JobError {
                                line: lineno,
                                col: 1,
                                message: format!("bad prime '{p}'"),
                            })?;
                            FieldSpec::PrimeField(p)
                        }
                        _ => return err(lineno, 1, "field must be 'Q' or 'Fp [prime]'"),
                    };
                    if let Err(m) = field.validate() {
                        return err(lineno, 1, m);
                    }
                }
                "vars" => vars = split_csv(rest),
                "relations" => {
                    for r in split_csv(rest) {
                        ring_relations.push(r);
                        ring_relation_lines.push(lineno);
                    }
                }
                _ => return err(lineno, 1, format!("unknown ring key '{key}'")),
            },
            Block::Module(idx) => match key {
                "}" => block = Block::Top,
                "gens" => {
                    for part in split_csv(rest) {
                        let n: usize = part.parse().map_err(|_| JobError {
                            line: lineno,
                            col: 1,
                            message: format!(
                                "generator degree '{part}' must be a non-negative integer"
                            ),
                        })?;
                        modules[idx].gens.push(n);
                    }
                }
                "rel" => {
                    modules[idx].rel_columns.push(split_csv(rest));
                    modules[idx].rel_lines.push(lineno);
                }
                _ => return err(lineno, 1, format!("unknown module key '{key}'")),
            },
        }
    }
    if block != Block::Top {
        return err(text.lines().count(), 1, "unclosed block");
    }
    if !saw_ring {
        return err(1, 1, "missing ring block");
    }
    if vars.is_empty() {
        return err(1, 1, "ring block declares no vars");
    }
    let job = JobSpec {
        task: task.unwrap_or(Task::Report),
        field,
        vars,
        ring_relations,
        ring_relation_lines,
        modules,
        pair,
        j_bound,
        d_bound,
        out,
        format,
    };
    validate(&job)?;
    Ok(job)
}

/// Structure validation: variables distinct, polynomials well formed and
/// homogeneous against the declared twists, pair names declared.
fn validate(job: &JobSpec) -> Result<(), JobError> {
    for i in 0..job.vars.len() {
        for k in i + 1..job.vars.len() {
            if job.vars[i] == job.vars[k] {
                return err(1, 1, format!("duplicate variable '{}'", job.vars[i]));
            }
        }
    }
    // validation parses over Q; the backend re-parses over the chosen field
    let field = Rationals;
    let parse = |src: &str, what: &str, line: usize| -> Result<Polynomial<Rationals>, JobError> {
        parse_polynomial(&field, &job.vars, src).map_err(|e| JobError {
            line,
            col: e.offset + 1,
            message: format!("{what}: {}", e.message),
        })
    };
    for (l, src) in job.ring_relations.iter().enumerate() {
        let line = job.ring_relation_lines.get(l).copied().unwrap_or(1);
        let p = parse(src, &format!("ring relation {}", l + 1), line)?;
        match p.homogeneity() {
            Homogeneity::Degree(d) if d >= 1 => {}
            _ => {
                return err(
                    line,
                    1,
                    format!(
                        "ring relation {} must be homogeneous of positive degree",
                        l + 1
                    ),
                )
            }
        }
    }
    for m in &job.modules {
        if m.gens.is_empty() {
            return err(1, 1, format!("module '{}' declares no generators", m.name));
        }
        for (cidx, col) in m.rel_columns.iter().enumerate() {
            let line = m.rel_lines.get(cidx).copied().unwrap_or(1);
            if col.len() != m.gens.len() {
                return err(
                    line,
                    1,
                    format!(
                        "module '{}' relation {} has {} entries for {} generators",
                        m.name,
                        cidx + 1,
                        col.len(),
                        m.gens.len()
                    ),
                );
            }
            let mut twist: Option<usize> = None;
            for (gidx, src) in col.iter().enumerate() {
                let p = parse(
                    src,
                    &format!("module '{}' relation {} entry {}", m.name, cidx + 1, gidx + 1),
                    line,
                )?;
                match p.homogeneity() {
                    Homogeneity::Zero => {}
                    Homogeneity::Degree(d) => {
                        let t = m.gens[gidx] + d;
                        if let Some(t0) = twist {
                            if t != t0 {
                                return err(line, 1, format!(
                                    "module '{}' relation {} entry {}: degree {} puts the column in degree {}, but earlier entries put it in degree {}",
                                    m.name, cidx + 1, gidx + 1, d, t, t0
                                ));
                            }
                        } else {
                            twist = Some(t);
                        }
                    }
                    Homogeneity::Mixed => {
                        return err(
                            line,
                            1,
                            format!(
                                "module '{}' relation {} entry {} is not homogeneous",
                                m.name,
                                cidx + 1,
                                gidx + 1
                            ),
                        )
                    }
                }
            }
            if twist.is_none() {
                return err(
                    line,
                    1,
                    format!(
                        "module '{}' relation {} has no nonzero entry",
                        m.name,
                        cidx + 1
                    ),
                );
            }
        }
    }
    if let Some((a, b)) = &job.pair {
        for name in [a, b] {
            if job.module(name).is_none() {
                return err(1, 1, format!("pair references undeclared module '{name}'"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
task eta
ring {
  field Q
  vars x
  relations x^2
}
module M {
  gens 0
  rel x
}
";

    #[test]
    fn minimal_job_parses() {
        let job = parse_job(MINIMAL).unwrap();
        assert_eq!(job.task, Task::Eta);
        assert_eq!(job.vars, vec!["x"]);
        assert_eq!(job.modules.len(), 1);
        assert_eq!(job.effective_pair(), Some(("M".into(), "M".into())));
    }

    #[test]
    fn homogeneity_error_names_the_cell() {
        let bad = "
ring {
  field Q
  vars x, y
  relations x^2
}
module M {
  gens 0, 0
  rel x, 1
}
";
        let e = parse_job(bad).unwrap_err();
        assert!(
            e.message.contains("relation 1 entry 2"),
            "got: {}",
            e.message
        );
    }

    #[test]
    fn unknown_variable_is_reported() {
        let bad = "
ring {
  field Q
  vars x
  relations x*w
}
";
        let e = parse_job(bad).unwrap_err();
        assert!(e.message.contains("unknown variable 'w'"), "{}", e.message);
    }

    #[test]
    fn jorgensen_module_block_matches_three_by_two_presentation() {
        let text = "
task eta
pair M N
bounds J=14 D=18
ring {
  field Q
  vars x, y, z, u
  relations x*y, z*u
}
module M {
  gens 0
  rel y
  rel u
}
module N {
  gens 0, 0, 0
  rel 0, -z, y
  rel u, x, 0
}
";
        let job = parse_job(text).unwrap();
        let n = job.module("N").unwrap();
        assert_eq!(n.gens, vec![0, 0, 0]);
        assert_eq!(n.rel_columns.len(), 2);
        assert_eq!(n.rel_columns[0], vec!["0", "-z", "y"]);
        assert_eq!(job.j_bound, Some(14));
        assert_eq!(job.d_bound, Some(18));
        assert_eq!(job.pair, Some(("M".into(), "N".into())));
    }

    #[test]
    fn prime_field_parses_and_validates() {
        let text = "
ring {
  field Fp 32003
  vars x
  relations x^2
}
module M {
  gens 0
  rel x
}
";
        let job = parse_job(text).unwrap();
        assert_eq!(job.field, FieldSpec::PrimeField(32003));
        let bad = text.replace("32003", "32001");
        assert!(parse_job(&bad).is_err());
    }
}
