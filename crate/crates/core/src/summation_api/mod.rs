pub mod ast;
pub mod compile;
pub mod convert;
pub mod drivers;
pub mod parser;

pub use ast::Expr;
pub use compile::{decompile, CompileError, Compiler};
pub use drivers::{
    creative_telescope, creative_telescope_with, format_point, solve_first_order_recurrence, telescope, telescope_with, verify_identity, CreativeTelescoping, DefiniteSum, Grid, Recurrence, SummationError, Telescoping,
    VerifyReport,
};
pub use parser::{parse, parse_expression, ParseError};
