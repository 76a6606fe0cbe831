pub mod cli;
pub mod realize;
pub mod sieve;
pub mod spectrum;
pub mod surd;
pub mod taxonomy;
pub mod tensor;
