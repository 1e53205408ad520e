"""Numerical tables for revpair2d.

Generated by tools/generate_tables.py; do not edit by hand.
Chebyshev coefficient conventions match
numpy.polynomial.chebyshev.chebval.
"""

# Bessel functions, small side x in [0, 5]; argument u = 0.08*x*x - 1.
# J0(x) = C(J0_SMALL)(u)
# J1(x) = x * C(J1_SMALL)(u)
# Y0(x) = (2/pi)*log(x)*J0(x) + C(Y0_SMALL)(u)
# Y1(x) = (2/pi)*(log(x)*J1(x) - 1/x) + x * C(Y1_SMALL)(u)
J0_SMALL = [
    0.0023409898253245504, -0.49420509340952434, 0.39793736723207573,
    -0.09383145879659378, 0.010887531648681012, -0.0007606267657733754,
    3.569483646356939e-05, -1.2060697061368316e-06, 3.079038572034392e-08,
    -6.154405541206829e-10, 9.89883306235983e-12, -1.3093862877228934e-13,
    1.449925455546083e-15, -1.3640331632027614e-17, 1.1038719069245942e-19,
]

J1_SMALL = [
    0.12472176826504336, -0.2686845684799195, 0.09129790663903893,
    -0.014004653451391028, 0.001219706194308904, -6.861294107933131e-05,
    2.7033690715030914e-06, -7.885506927808829e-08, 1.7729297565883533e-09,
    -3.168183400785992e-11, 4.609607207864301e-13, -5.568208308467139e-15,
    5.674750797163287e-17, -4.945591701810024e-19,
]

Y0_SMALL = [
    0.20605257634092228, -0.13017522381095709, -0.291894720865317,
    0.10268287966073635, -0.014279159901781987, 0.0011164629864165486,
    -5.677525113380376e-05, 2.0406703657627165e-06, -5.476431029755533e-08,
    1.141220652090372e-09, -1.9021689490013906e-11, 2.5954970583106197e-13,
    -2.9540707750193604e-15, 2.848154182311252e-17, -2.356607585530683e-19,
]

Y1_SMALL = [
    0.0531074450560213, 0.14189450894667655, -0.08834328868289824,
    0.017111109934210778, -0.0017057852565133666, 0.000105257530278434,
    -4.44507526565354e-06, 1.3699277670028168e-07, -3.222883768023259e-09,
    5.984534092223177e-11, -9.000965667133812e-13, 1.1194186560306676e-14,
    -1.1707921590181557e-16, 1.0444110354608508e-18,
]

# Asymptotic side x >= 5; argument u = 50/x^2 - 1, w = x - pi/4:
# J0 = sqrt(2/(pi x)) [P0 cos w - Q0 sin w]
# Y0 = sqrt(2/(pi x)) [P0 sin w + Q0 cos w]
# J1 = sqrt(2/(pi x)) [P1 sin w + Q1 cos w]
# Y1 = sqrt(2/(pi x)) [-P1 cos w + Q1 sin w]
# with P0 = C(P0_LARGE)(u), Q0 = C(Q0_LARGE)(u)/x, and same for order 1.
P0_LARGE = [
    0.9986523398776954, -0.00132937162125028, 1.761305551290559e-05,
    -6.319367118733069e-07, 3.948825587093808e-08, -3.5409678948019087e-09,
    4.103246366872386e-10, -5.765747662655223e-11, 9.423105578391987e-12,
    -1.7401405706283885e-12, 3.5557750052411783e-13, -7.914641501338115e-14,
    1.8959456362961828e-14, -4.841483019175697e-15, 1.3078555195901338e-15,
    -3.714050821413154e-16, 1.103023177871277e-16, -3.410936210498114e-17,
    1.0942187869810236e-17, -3.629905673795297e-18, 1.2418028891673288e-18,
    -4.370539298294471e-19, 1.579169035740111e-19,
]

Q0_LARGE = [
    -0.12364702582167493, 0.0013190194049922607, -3.218799121266175e-05,
    1.6237093205642789e-06, -1.2743289742032805e-07, 1.3513032763134409e-08,
    -1.785075905119705e-09, 2.79085713479036e-10, -4.988908027652833e-11,
    9.950713667806645e-12, -2.1751206043008833e-12, 5.140127162427605e-13,
    -1.2993242656059178e-13, 3.4837635776889786e-14, -9.84005757254373e-15,
    2.9115274918592e-15, -8.982151171303344e-16, 2.877768906557925e-16,
    -9.542905011731343e-17, 3.2658161943648366e-17, -1.1505181785326159e-17,
    4.16320426537859e-18, -1.5443691439003655e-18, 5.862959235519169e-19,
    -2.274364223825038e-19,
]

P1_LARGE = [
    1.00226762068534, 0.0022437352958079985, -2.3071018862548286e-05,
    7.639181732533905e-07, -4.589685232343401e-08, 4.020515478419001e-09,
    -4.586773977170972e-10, 6.373158962859246e-11, -1.0327344567640412e-11,
    1.8943274995111034e-12, -3.849703387824105e-13, 8.529914525779044e-14,
    -2.03544697865723e-14, 5.180421738900549e-15, -1.3953502148258493e-15,
    3.9523601713314257e-16, -1.171117080126803e-16, 3.614078564738109e-17,
    -1.1572356053251518e-17, 3.832473906744907e-18, -1.3090769675043101e-18,
    4.6007673630742315e-19, -1.660174796511471e-19,
]

Q1_LARGE = [
    0.37308734621468637, -0.0018705189681051477, 4.0056994520460306e-05,
    -1.914402839085632e-06, 1.458816510742199e-07, -1.5183398644673165e-08,
    1.979922260589517e-09, -3.065981449437696e-10, 5.440233592059753e-11,
    -1.0786652192538468e-11, 2.346352831758894e-12, -5.522046856541826e-13,
    1.390972848139383e-13, -3.7181516752164614e-14, 1.0474063117829167e-14,
    -3.091784202917912e-15, 9.518051831081499e-16, -3.0436450667050517e-16,
    1.0075487579997493e-16, -3.4426306619813246e-17, 1.2110503970221687e-17,
    -4.376388902428327e-18, 1.621444400574731e-18, -6.148494148608613e-19,
    2.382575802757983e-19,
]

# Two-double split of pi/4 for compensated phase reduction.
PIO4_HI = 0.7853981633974483
PIO4_LO = 3.061616997868383e-17

SQRT_TWO_OVER_PI = 0.7978845608028654
TWO_OVER_PI = 0.6366197723675814

# 7/15 Gauss-Kronrod rule on [-1, 1]. WEIGHTS_G7 is aligned with
# NODES_K15 and holds zeros at Kronrod-only abscissae.
NODES_K15 = [
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.20778495500789848, 0.0, 0.20778495500789848,
    0.4058451513773972, 0.5860872354676911, 0.7415311855993945,
    0.8648644233597691, 0.9491079123427585, 0.9914553711208126,
]

WEIGHTS_K15 = [
    0.022935322010529224, 0.06309209262997856, 0.10479001032225019,
    0.14065325971552592, 0.1690047266392679, 0.19035057806478542,
    0.20443294007529889, 0.20948214108472782, 0.20443294007529889,
    0.19035057806478542, 0.1690047266392679, 0.14065325971552592,
    0.10479001032225019, 0.06309209262997856, 0.022935322010529224,
]

WEIGHTS_G7 = [
    0.0, 0.1294849661688697, 0.0,
    0.27970539148927664, 0.0, 0.3818300505051189,
    0.0, 0.4179591836734694, 0.0,
    0.3818300505051189, 0.0, 0.27970539148927664,
    0.0, 0.1294849661688697, 0.0,
]
