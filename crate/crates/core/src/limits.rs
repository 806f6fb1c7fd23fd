//! Capacity limits. Every enumeration the library performs is checked
//! against one of these before it starts.

/// Largest residue field size.
pub const MAX_Q: u64 = 1 << 16;
/// Residue fields up to this size get precomputed multiplication tables.
pub const TABLE_Q: u64 = 1024;
/// Largest number of significant digits per field.
pub const MAX_PRECISION: u32 = 64;
/// Mixed characteristic mantissas live in `Z/p^precision`; this bounds `p^precision`.
pub const MAX_MIXED_MODULUS: u128 = 1 << 62;
/// Largest cyclotomic order.
pub const MAX_CYCLO_ORDER: u64 = 1 << 14;
/// Largest character family `q^d`.
pub const MAX_CHARACTERS: u64 = 1 << 17;
/// Largest finite abelian group for exact Fourier analysis.
pub const MAX_GROUP: u64 = 1 << 12;
/// Largest number of points a single enumeration may visit.
pub const MAX_ENUM: u64 = 1 << 22;
