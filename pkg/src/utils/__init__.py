# approxinc utils package
