//! 2-adic valuations, Pell and Fibonacci solutions, and the infinite families
//! of nontrivial bisections.

mod families;
mod pell;
mod primes;
mod valuation;

pub use families::{
    family_n_list, family_order, family_witness, family_witnesses, fibonacci_pell_x_candidates,
    Family, FamilyWitness, MAX_WITNESS_N, THEOREM_FAMILIES,
};
pub use pell::{fibonacci, fibonacci_pair, lucas, pell_solutions, PellSolution};
pub use primes::{binomial_congruence_check, is_prime, jp_minus_one_check};
pub use valuation::{
    rk_sum, v2_binomial, valuation_tableaux, ValuationTableaux, MAX_RK_EXPONENT,
    MAX_TABLEAUX_EXPONENT,
};
