//! Exact integer linear algebra: promoting integers, sparse matrices, Smith
//! normal form, ranks modulo primes and chain-complex cancellation.

pub mod integer;
pub mod matrix;
pub mod modp;
pub mod reduce;
pub mod smith;

pub use integer::Int;
pub use matrix::IntMatrix;
pub use modp::{is_prime, rank_mod_p};
pub use reduce::{reduce_chain, ReducedChain};
pub use smith::{rank, smith_normal_form, SmithForm};
