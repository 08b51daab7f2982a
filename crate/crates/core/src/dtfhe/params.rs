pub struct ParamSet;
pub struct Preset;
