#pragma once

#include "qmcis/bounds.hpp"
#include "qmcis/dirichlet.hpp"
#include "qmcis/discrepancy.hpp"
#include "qmcis/errors.hpp"
#include "qmcis/estimators.hpp"
#include "qmcis/experiments.hpp"
#include "qmcis/gauss_legendre.hpp"
#include "qmcis/integrands.hpp"
#include "qmcis/io.hpp"
#include "qmcis/point_set.hpp"
#include "qmcis/sequences.hpp"
#include "qmcis/model_strings.hpp"
#include "qmcis/summation.hpp"
