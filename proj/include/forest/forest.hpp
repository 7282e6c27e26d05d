#ifndef FOREST_FOREST_HPP
#define FOREST_FOREST_HPP

#include <forest/attack_io.hpp>
#include <forest/bounds.hpp>
#include <forest/centrality.hpp>
#include <forest/errors.hpp>
#include <forest/exact_greedy.hpp>
#include <forest/fast_greedy.hpp>
#include <forest/forest_state.hpp>
#include <forest/graph.hpp>
#include <forest/oracle.hpp>
#include <forest/sketch.hpp>

#endif
