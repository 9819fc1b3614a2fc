//! Characteristic classes of K-theory classes given by their Chern
//! characters: Todd class, `c_t`, the equivariant Euler class `e_q`, the
//! Todd twist by a formal line bundle, and the identity
//! `e_q(R) = c_{e^{-q}}(R) Td(R (x) O(q)) / Td(R)`.

mod classes;
mod kclass;
mod numbers;

pub use classes::{
    euler_eq, frak_c, frak_c_formal, frak_c_value, s_l, s_l_series, s_l_value, todd,
    todd_twist_ratio, verify_compfce, verify_compfce_batch, ClassValue, CompfceCheck, TParam,
    TScalar,
};
pub use kclass::{KClass, Weight};
pub use numbers::{bernoulli, bernoulli_numbers, binomial, factorial, gamma_lk};
