# movepat tests
