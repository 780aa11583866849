//! Register machines with an oracle, their numbering, and runs.

mod jump;
mod native;
mod oracle;
mod program;
mod recursion;
mod run;

pub use jump::{iterated_jump_stage, jump_oracle, jump_stage, omega_jump_stage};
pub use oracle::{Oracle, OracleKind};
pub use program::{
    decode_program, encode_program, native_index, parse_program, Instruction, Native, Program, ProgramParseError,
    MAX_OPERAND, NATIVE_MARK,
};
pub use recursion::{agree_on, fixed_point, smn, FixedPoint, RecursionError};
pub use run::{run, Divergence, Meter, Outcome, MAX_NESTING};
