#pragma once

#include "class_series.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "group_algebra.hpp"
#include "k1.hpp"
#include "main_check.hpp"
#include "orbits.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "torsion.hpp"
#include "witt.hpp"
#include "zeta.hpp"
