//! Accelerator cost model (stub during bring-up).
