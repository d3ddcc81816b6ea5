pub mod reward;
pub mod syntax;
pub mod operational;
pub mod monads;
pub mod strategies;
pub mod selection;
pub mod equations;
pub mod testgen;
pub mod suites;
