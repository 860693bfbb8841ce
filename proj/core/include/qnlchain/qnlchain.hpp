#pragma once

#include "qnlchain/analysis.hpp"
#include "qnlchain/chain.hpp"
#include "qnlchain/constants.hpp"
#include "qnlchain/errors.hpp"
#include "qnlchain/io.hpp"
#include "qnlchain/models.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/parallel.hpp"
#include "qnlchain/potential.hpp"
#include "qnlchain/stability.hpp"
#include "qnlchain/verification.hpp"
