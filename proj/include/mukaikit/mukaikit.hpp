#pragma once

#include "mukaikit/error.hpp"
#include "mukaikit/exactlin.hpp"
#include "mukaikit/lattice.hpp"
#include "mukaikit/moduli.hpp"
#include "mukaikit/mukai.hpp"
#include "mukaikit/short_vectors.hpp"
#include "mukaikit/surface.hpp"
#include "mukaikit/twisted.hpp"
#include "mukaikit/walls.hpp"
