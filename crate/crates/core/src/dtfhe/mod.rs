//! DTFHE scheme (stub during bring-up).
pub mod params;
