//! Loading instances and templates, and the exit-status contract.

use std::fmt;
use std::fs;
use std::path::Path;

use xcsp::formula::{parse_instance, parse_template, Instance, Template};
use xcsp::oracle::BudgetExhausted;

/// Anything that ends a run without a verdict. Each kind has its own exit
/// status, which scripts rely on.
#[derive(Debug)]
pub enum Failure {
    /// Bad file, bad flag value, or input ended during play.
    Parse(String),
    /// The method's preconditions do not hold for this instance and template.
    Unsupported(String),
    Budget(BudgetExhausted),
    Validator(String),
    /// A disagreement or unexplained failure found by bench or selftest.
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Validator(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Unsupported(m) => write!(f, "unsupported: {m}"),
            Failure::Budget(b) => write!(f, "{b}"),
            Failure::Validator(m) => write!(f, "validator rejected the output: {m}"),
            Failure::Check(m) => write!(f, "{m}"),
        }
    }
}

impl From<BudgetExhausted> for Failure {
    fn from(b: BudgetExhausted) -> Self {
        Failure::Budget(b)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// A named template, an inline edge list, or a template file.
pub fn load_template(spec: &str) -> Result<Template, Failure> {
    if let Some(t) = Template::parse_spec(spec) {
        return Ok(t);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::Parse(format!(
            "`{spec}` is neither a template name, an inline edge list, nor a file"
        )));
    }
    parse_template(&read(path)?)
        .map(Template::Finite)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}
