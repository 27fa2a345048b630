use smuc::dist::DistError;
use smuc::eval::EvalError;
use smuc::formula::FormulaError;
use smuc::program::ProgramError;
use smuc::saf::SafError;

const FORMULA_GRAMMAR: &str = "\
formula ::= (mu | nu) var . formula
          | < (out | in) [cap] [: agg] > [agg] formula
          | name ( [formula (, formula)*] )
          | name | number | inf | true | false
          | (bot | top) [ domain ]
          | ( formula )";

const PROGRAM_GRAMMAR: &str = "\
prog ::= stmt (; stmt)* [;]
stmt ::= skip | label <- formula | free ( label (, label)* )
       | if formula then stmt [else stmt]
       | until formula do stmt
       | { prog }";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unreadable files, syntax, unknown labels, type errors.
    #[error("{0}")]
    User(String),
    #[error("invariant violated: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Violation(_) => 2,
        }
    }

    pub fn user(msg: impl std::fmt::Display) -> Self {
        CliError::User(msg.to_string())
    }

    /// A syntax error followed by the grammar it broke.
    pub fn syntax(e: FormulaError, program: bool) -> Self {
        match e {
            FormulaError::Parse { .. } => {
                let grammar = if program { format!("{PROGRAM_GRAMMAR}\n{FORMULA_GRAMMAR}") } else { FORMULA_GRAMMAR.into() };
                CliError::User(format!("{e}\n\nexpected syntax:\n{grammar}"))
            }
            other => CliError::user(other),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        CliError::user(e)
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::user(e)
    }
}

impl From<ProgramError> for CliError {
    fn from(e: ProgramError) -> Self {
        match e {
            ProgramError::Terminated => CliError::Violation(e.to_string()),
            other => CliError::user(other),
        }
    }
}

impl From<SafError> for CliError {
    fn from(e: SafError) -> Self {
        match e {
            SafError::Program(p) => p.into(),
            SafError::CounterOverflow => CliError::Violation(e.to_string()),
            other => CliError::user(other),
        }
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        match e {
            DistError::Deadlock { .. } | DistError::PartialLabel(_) => CliError::Violation(e.to_string()),
            other => CliError::user(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::user(e)
    }
}
