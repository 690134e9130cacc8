# Difference quotient of the Dirichlet function (1 on rationals, 0 elsewhere),
# written out by rationality of the endpoints.
DIRICHLET_SOURCE = (
    "piecewise{ rat(a) && rat(b) : 0 ; !rat(a) && !rat(b) : 0 ; "
    "!rat(a) : 1/(b-a) ; true : -1/(b-a) }"
)

# Exact pool covering every rationality combination of the endpoints;
# 3/4*sqrt2 lies beyond 1 and is dropped by the sampler
DIRICHLET_POOL = (
    "0",
    "1/4",
    "1/3",
    "1/2",
    "3/4",
    "1/2*sqrt2",
    "1/3*sqrt2",
    "3/4*sqrt2",
    "1",
)
