#pragma once

#include "nng/comm.hpp"
#include "nng/config.hpp"
#include "nng/cover_tree.hpp"
#include "nng/graph.hpp"
#include "nng/io.hpp"
#include "nng/landmark.hpp"
#include "nng/metric.hpp"
#include "nng/oracle.hpp"
#include "nng/pipeline.hpp"
#include "nng/point_set.hpp"
#include "nng/report.hpp"
#include "nng/systolic.hpp"
#include "nng/types.hpp"
