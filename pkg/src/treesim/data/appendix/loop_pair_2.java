int jacobsthalNumber = 1;
        for(int i = 2; i <= n; i++){
            jacobsthalNumber = jacobsthalNumber + (n - i) * (i - 1);
        }
        return jacobsthalNumber;
    }
}
