#pragma once

#include "algebra.hpp"
#include "activation.hpp"
#include "network.hpp"
#include "erosion.hpp"
#include "loss.hpp"
#include "backward.hpp"
#include "backprop.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "io.hpp"
