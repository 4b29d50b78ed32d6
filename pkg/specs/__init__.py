from specs import experiments, maps
