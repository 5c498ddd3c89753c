//! Finite fields, Weierstrass curves, finite groups and their integral
//! homology, and the tree spectral sequence for PGL2 over affine elliptic
//! coordinate rings.

pub mod abgrp;
pub mod curve;
pub mod field;
pub mod exec;
pub mod grouph;
pub mod domain;
pub mod coeffsys;
