//! Surface language: AST, lexer, parser and printers.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use ast::{Program, Term, Type, Value};
pub use parser::{parse_index, parse_program, parse_term, parse_type, ParseError};
