//! Netlist bench (stub during bring-up).
