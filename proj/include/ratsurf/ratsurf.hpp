#pragma once

#include "ratsurf/errors.hpp"
#include "ratsurf/matrix.hpp"
#include "ratsurf/lattice.hpp"
#include "ratsurf/rootsys.hpp"
#include "ratsurf/abelian.hpp"
#include "ratsurf/folding.hpp"
#include "ratsurf/moduli.hpp"
#include "ratsurf/config.hpp"
#include "ratsurf/liealg.hpp"
#include "ratsurf/repbundles.hpp"
#include "ratsurf/verify.hpp"
