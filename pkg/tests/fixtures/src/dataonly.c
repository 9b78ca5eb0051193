int the_answer = 42;
