#pragma once

namespace gridrisk {

// Non-leap calendar over days 1..365 and hours of year 1..8760.
// Hour of year H maps to day (H-1)/24 + 1 and hour of day H - (day-1)*24.

int month_of_day(int day_of_year);               // 1..12
int season_of_month(int month);                  // 0 winter (Dec-Feb), 1 spring, 2 summer, 3 fall
int day_of_hour(int hour_of_year);               // 1..365
int hour_of_day(int hour_of_year);               // 1..24
int hour_of_year(int day_of_year, int hour_of_day);

}  // namespace gridrisk
