#ifndef LONGCAST_LONGCAST_HPP_
#define LONGCAST_LONGCAST_HPP_

#include "aggregator.hpp"
#include "bounds.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "game.hpp"
#include "generate.hpp"
#include "io.hpp"
#include "loss.hpp"
#include "numeric.hpp"
#include "oracle.hpp"
#include "prior.hpp"
#include "replication.hpp"
#include "weights.hpp"

#endif  // LONGCAST_LONGCAST_HPP_
